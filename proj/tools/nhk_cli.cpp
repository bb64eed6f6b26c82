// Command-line front end: dataset generation, label-propagation traces,
// model training, labeled-count sweeps, and decision-boundary export.
// Exit codes: 0 success, 2 invalid arguments, 1 numerical/data failure.

#include "nhk/datasets.hpp"
#include "nhk/diffusion.hpp"
#include "nhk/eval.hpp"
#include "nhk/io.hpp"
#include "nhk/metric.hpp"
#include "nhk/multiclass.hpp"
#include "nhk/pipeline.hpp"
#include "nhk/solvers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using Scalar = double;
using nhk::Index;

struct DataFlags {
  std::string data;
  std::string images, labels;
  std::vector<int> digits;
  Index per_class = 0;
  Index label_per_class = 0;
  std::uint64_t label_seed = 0;
};

struct ModelFlags {
  std::string model = "nhkrls";
  nhk::ModelParams<Scalar> params;
  std::string metric = "geodesic";

  nhk::ModelParams<Scalar> resolved() const {
    nhk::ModelParams<Scalar> p = params;
    if (metric == "euclidean")
      p.transition_metric = nhk::Metric::euclidean;
    else if (metric == "geodesic")
      p.transition_metric = nhk::Metric::geodesic;
    else
      throw std::invalid_argument("unknown metric '" + metric + "'");
    p.validate();
    return p;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& m, bool with_name = true) {
  if (with_name)
    cmd->add_option("--model", m.model, "nhkrls | laprls | ls")
        ->check(CLI::IsMember({"nhkrls", "laprls", "ls"}));
  cmd->add_option("--gamma-a", m.params.gamma_a, "kernel-norm weight");
  cmd->add_option("--gamma-i", m.params.gamma_i, "manifold-penalty weight");
  cmd->add_option("--epsilon", m.params.epsilon, "kernel bandwidth (0 = median heuristic)");
  cmd->add_option("--steps", m.params.diffusion_steps, "diffusion steps t");
  cmd->add_option("--knn", m.params.knn_k, "nearest-neighbor count");
  cmd->add_option("--tau", m.params.tau, "relabeling threshold in (0,1)");
  cmd->add_option("--ridge-jitter", m.params.ridge_jitter, "diagonal jitter on ill-conditioning");
  cmd->add_option("--steps-per-unit", m.params.steps_per_unit,
                  "P applications per diffusion step (0 = round(1/epsilon))");
  cmd->add_option("--metric", m.metric, "transition-matrix metric: geodesic | euclidean")
      ->check(CLI::IsMember({"geodesic", "euclidean"}));
}

void add_data_flags(CLI::App* cmd, DataFlags& d) {
  cmd->add_option("--data", d.data, "dataset CSV (x1..xn,label,true_class)");
  cmd->add_option("--images", d.images, "IDX3 image file");
  cmd->add_option("--labels", d.labels, "IDX1 label file");
  cmd->add_option("--digits", d.digits, "two digits for a binary task, e.g. 0,8")
      ->delimiter(',');
  cmd->add_option("--per-class", d.per_class, "subsample this many images per digit");
  cmd->add_option("--label-per-class", d.label_per_class,
                  "mark this many points per class as labeled");
  cmd->add_option("--label-seed", d.label_seed, "seed for the labeled-subset draw");
}

nhk::GeneratedDataset<Scalar> load_idx_binary(const DataFlags& f, std::uint64_t seed) {
  auto [pts, classes] = nhk::load_idx<Scalar>(f.images, f.labels);
  if (f.digits.size() != 2)
    throw std::invalid_argument("--digits must name exactly two classes for IDX input");
  std::vector<Index> keep;
  std::mt19937_64 rng(seed);
  for (int digit : f.digits) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == digit) members.push_back(static_cast<Index>(i));
    if (members.empty())
      throw std::invalid_argument("digit " + std::to_string(digit) + " absent from IDX data");
    if (f.per_class > 0) {
      if (static_cast<Index>(members.size()) < f.per_class)
        throw std::invalid_argument("digit " + std::to_string(digit) + " has fewer than --per-class images");
      std::vector<Index> chosen;
      std::sample(members.begin(), members.end(), std::back_inserter(chosen), f.per_class, rng);
      members = std::move(chosen);
    }
    keep.insert(keep.end(), members.begin(), members.end());
  }
  nhk::Matrix<Scalar> sel(static_cast<Index>(keep.size()), pts.cols());
  std::vector<int> sel_cls(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sel.row(static_cast<Index>(i)) = pts.row(keep[i]);
    sel_cls[i] = classes[static_cast<std::size_t>(keep[i])];
  }
  return {nhk::make_unlabeled(std::move(sel)), std::move(sel_cls)};
}

nhk::GeneratedDataset<Scalar> load_input(const DataFlags& f, std::uint64_t seed) {
  nhk::GeneratedDataset<Scalar> gd;
  if (!f.data.empty()) {
    gd = nhk::load_dataset_csv<Scalar>(f.data);
  } else if (!f.images.empty() && !f.labels.empty()) {
    gd = load_idx_binary(f, seed);
  } else {
    throw std::invalid_argument("need --data or --images/--labels");
  }
  if (f.label_per_class > 0)
    gd.data = nhk::label_k_per_class(gd.data, gd.true_class, f.label_per_class,
                                     f.label_seed);
  return gd;
}

json params_json(const std::string& model, const nhk::ModelParams<Scalar>& p) {
  return json{{"model", model},
              {"gamma_a", p.gamma_a},
              {"gamma_i", p.gamma_i},
              {"epsilon", p.epsilon},
              {"steps", p.diffusion_steps},
              {"knn", p.knn_k},
              {"tau", p.tau},
              {"ridge_jitter", p.ridge_jitter},
              {"steps_per_unit", p.steps_per_unit},
              {"metric", nhk::to_string(p.transition_metric)}};
}

int run(int argc, char** argv) {
  CLI::App app{"Semi-supervised classification via heat-kernel manifold regularization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value defaults file");

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  std::string gen_dataset = "two-moons", gen_out = "dataset.csv";
  Index gen_n = 400;
  Scalar gen_noise = 0.05, gen_turns = 3.0;
  std::uint64_t gen_seed = 0;
  Index gen_label_k = 0;
  std::uint64_t gen_label_seed = 0;
  gen->add_option("--dataset", gen_dataset, "two-moons | ring | two-clusters | spiral")
      ->check(CLI::IsMember({"two-moons", "ring", "two-clusters", "spiral"}));
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option("--noise", gen_noise, "Gaussian coordinate noise stdev");
  gen->add_option("--turns", gen_turns, "spiral turns");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--label-per-class", gen_label_k, "label this many points per class");
  gen->add_option("--label-seed", gen_label_seed, "seed for the labeled draw");
  gen->add_option("--out", gen_out, "output CSV path");

  // propagate ---------------------------------------------------------------
  auto* prop = app.add_subcommand("propagate", "run clamped label diffusion, write a step trace");
  DataFlags prop_data;
  ModelFlags prop_model;
  add_data_flags(prop, prop_data);
  add_model_flags(prop, prop_model, /*with_name=*/false);
  std::vector<std::string> prop_clamps;
  std::string prop_out = "trace.csv";
  prop->add_option("--clamp", prop_clamps, "extra clamp index:value, e.g. 150:1")->allow_extra_args(false);
  prop->add_option("--out", prop_out, "trace CSV path (step,index,u)");

  // train -------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "fit a model, write per-point predictions");
  DataFlags train_data;
  ModelFlags train_model;
  add_data_flags(train, train_data);
  add_model_flags(train, train_model);
  std::string train_out = "predictions.csv", train_metrics;
  std::uint64_t train_seed = 0;
  bool train_timing = false;
  train->add_option("--seed", train_seed, "seed for IDX subsampling");
  train->add_option("--out", train_out, "predictions CSV path (index,score,sign)");
  train->add_option("--metrics-out", train_metrics, "optional metrics JSON path");
  train->add_flag("--timing", train_timing, "include wall time in metrics (not byte-reproducible)");

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "error vs labeled count over models");
  DataFlags sweep_data;
  ModelFlags sweep_model;
  add_data_flags(sweep, sweep_data);
  add_model_flags(sweep, sweep_model, /*with_name=*/false);
  std::string sweep_test, sweep_test_images, sweep_test_labels;
  std::vector<std::string> sweep_models{"nhkrls", "laprls", "ls"};
  std::vector<Index> sweep_counts{2, 4, 8};
  int sweep_trials = 1;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out = "sweep.csv", sweep_json;
  bool sweep_timing = false;
  sweep->add_option("--test", sweep_test, "held-out dataset CSV");
  sweep->add_option("--test-images", sweep_test_images, "held-out IDX3 images");
  sweep->add_option("--test-labels", sweep_test_labels, "held-out IDX1 labels");
  sweep->add_option("--models", sweep_models, "models to sweep")->delimiter(',');
  sweep->add_option("--counts", sweep_counts, "labeled-per-class counts")->delimiter(',');
  sweep->add_option("--trials", sweep_trials, "trials per count");
  sweep->add_option("--seed", sweep_seed, "sweep seed");
  sweep->add_option("--out", sweep_out, "sweep CSV path");
  sweep->add_option("--json-out", sweep_json, "optional sweep JSON path");
  sweep->add_flag("--timing", sweep_timing, "write measured seconds (not byte-reproducible)");

  // boundary ----------------------------------------------------------------
  auto* bound = app.add_subcommand("boundary", "train and classify random points in a box");
  DataFlags bound_data;
  ModelFlags bound_model;
  add_data_flags(bound, bound_data);
  add_model_flags(bound, bound_model);
  Index bound_samples = 6000;
  std::uint64_t bound_seed = 0;
  std::vector<Scalar> bound_bounds;
  std::string bound_out = "boundary.csv";
  bound->add_option("--samples", bound_samples, "random sample count");
  bound->add_option("--seed", bound_seed, "sampling seed");
  bound->add_option("--bounds", bound_bounds, "xmin,xmax,ymin,ymax (default: data box + margin)")
      ->delimiter(',');
  bound->add_option("--out", bound_out, "boundary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      nhk::GeneratedDataset<Scalar> gd;
      if (gen_dataset == "two-moons")
        gd = nhk::generate_two_moons<Scalar>(gen_n, gen_noise, gen_seed);
      else if (gen_dataset == "ring")
        gd = nhk::generate_ring<Scalar>(gen_n, gen_noise, gen_seed);
      else if (gen_dataset == "two-clusters")
        gd = nhk::generate_two_clusters<Scalar>(gen_n, gen_noise, gen_seed);
      else
        gd = nhk::generate_spiral<Scalar>(gen_n, gen_turns, gen_seed);
      if (gen_label_k > 0)
        gd.data = nhk::label_k_per_class(gd.data, gd.true_class, gen_label_k, gen_label_seed);
      nhk::write_file(gen_out, nhk::dataset_csv(gd.data, gd.true_class));
      std::cout << "wrote " << gd.data.size() << " points to " << gen_out << "\n";
      return 0;
    }

    if (prop->parsed()) {
      auto gd = load_input(prop_data, 0);
      nhk::Vector<Scalar> labels = gd.data.labels;
      for (const auto& spec : prop_clamps) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("--clamp wants index:value, got '" + spec + "'");
        const Index idx = std::stol(spec.substr(0, colon));
        const Scalar val = std::stod(spec.substr(colon + 1));
        if (idx < 0 || idx >= gd.data.size())
          throw std::invalid_argument("--clamp index out of range");
        if (val != Scalar(1) && val != Scalar(-1))
          throw std::invalid_argument("--clamp value must be +1 or -1");
        labels[idx] = val;
      }
      nhk::LabeledDataset<Scalar> ds = nhk::make_dataset(gd.data.points, std::move(labels));
      if (ds.labeled_idx.empty())
        throw std::invalid_argument("no labeled points: use --clamp or --label-per-class");
      const nhk::ModelParams<Scalar> params = prop_model.resolved();
      const auto P = nhk::build_transition(ds.points, params);
      auto state = nhk::initial_state(ds);
      std::vector<nhk::Vector<Scalar>> steps{state.u};
      for (long s = 0; s < params.diffusion_steps; ++s) {
        state = nhk::propagate(P, state, 1);
        steps.push_back(state.u);
      }
      bool noncontiguous = false;
      for (std::size_t s = 0; s < steps.size(); ++s) {
        const Index colored = (steps[s].array().abs() > Scalar(0)).count();
        const Index gaps = nhk::contiguity_violations(steps[s]);
        if (gaps > (2 * ds.size()) / 100) noncontiguous = true;
        std::cout << "step " << s << ": colored " << colored << "/" << ds.size()
                  << ", span gaps " << gaps << "\n";
      }
      std::cout << (noncontiguous ? "trace NONCONTIGUOUS in index order\n"
                                  : "trace contiguous in index order\n");
      nhk::write_file(prop_out, nhk::trace_csv(steps));
      std::cout << "wrote trace to " << prop_out << "\n";
      return 0;
    }

    if (train->parsed()) {
      auto gd = load_input(train_data, train_seed);
      const nhk::ModelParams<Scalar> params = train_model.resolved();
      const auto start = std::chrono::steady_clock::now();
      const auto clf = nhk::fit_model(train_model.model, gd.data, params);
      const nhk::Vector<Scalar> scores = nhk::predict_batch(clf, gd.data.points);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

      std::ostringstream pred;
      pred << "index,score,sign\n";
      for (Index i = 0; i < scores.size(); ++i)
        pred << i << "," << nhk::fmt(scores[i]) << ","
             << nhk::fmt(scores[i] < 0 ? -1.0 : 1.0) << "\n";

      json metrics = params_json(train_model.model, params);
      metrics["n"] = gd.data.size();
      metrics["labeled"] = static_cast<Index>(gd.data.labeled_idx.size());
      bool have_truth = false;
      try {
        const nhk::Vector<Scalar> truth = nhk::signs_from_classes<Scalar>(gd.true_class);
        nhk::Vector<Scalar> signs(scores.size());
        for (Index i = 0; i < scores.size(); ++i) signs[i] = scores[i] < 0 ? -1 : 1;
        metrics["train_error"] = nhk::error_rate(signs, truth);
        have_truth = true;
      } catch (const std::invalid_argument&) {
        // no binary ground truth in the file; skip the error metric
      }
      if (train_timing) metrics["seconds"] = elapsed.count();

      nhk::write_file(train_out, pred.str());
      if (!train_metrics.empty()) nhk::write_file(train_metrics, metrics.dump(2) + "\n");
      std::cout << "trained " << train_model.model << " on " << gd.data.size()
                << " points (" << gd.data.labeled_idx.size() << " labeled) in "
                << elapsed.count() << " s\n";
      if (have_truth)
        std::cout << "train error vs ground truth: " << metrics["train_error"] << "\n";
      std::cout << "wrote predictions to " << train_out << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      auto train_gd = load_input(sweep_data, sweep_seed);
      nhk::GeneratedDataset<Scalar> test_gd;
      if (!sweep_test.empty()) {
        test_gd = nhk::load_dataset_csv<Scalar>(sweep_test);
      } else if (!sweep_test_images.empty() && !sweep_test_labels.empty()) {
        DataFlags tf;
        tf.images = sweep_test_images;
        tf.labels = sweep_test_labels;
        tf.digits = sweep_data.digits;
        tf.per_class = 0;
        test_gd = load_idx_binary(tf, sweep_seed + 1);
      } else {
        throw std::invalid_argument("need --test or --test-images/--test-labels");
      }
      const nhk::ModelParams<Scalar> params = sweep_model.resolved();
      std::vector<nhk::ModelSpec<Scalar>> specs;
      for (const auto& name : sweep_models) specs.push_back({name, params});
      const auto result = nhk::sweep_labeled_counts(
          train_gd.data.points, train_gd.true_class, test_gd.data.points,
          test_gd.true_class, specs, sweep_counts, sweep_trials, sweep_seed);
      nhk::write_file(sweep_out, nhk::sweep_csv(result, sweep_timing));
      if (!sweep_json.empty()) {
        json rows = json::array();
        for (const auto& r : result.rows)
          rows.push_back({{"model", r.model},
                          {"count", r.labeled_per_class},
                          {"trial", r.trial},
                          {"error", r.error_rate},
                          {"seconds", sweep_timing ? r.seconds : 0.0}});
        nhk::write_file(sweep_json, rows.dump(2) + "\n");
      }
      for (const auto& r : result.rows)
        std::cout << r.model << " count=" << r.labeled_per_class
                  << " trial=" << r.trial << " error=" << r.error_rate << " ("
                  << r.seconds << " s)\n";
      std::cout << "wrote sweep to " << sweep_out << "\n";
      return 0;
    }

    if (bound->parsed()) {
      auto gd = load_input(bound_data, bound_seed);
      if (gd.data.dim() != 2)
        throw std::invalid_argument("boundary needs a 2-D dataset");
      const nhk::ModelParams<Scalar> params = bound_model.resolved();
      const auto clf = nhk::fit_model(bound_model.model, gd.data, params);
      Scalar x0, x1, y0, y1;
      if (bound_bounds.empty()) {
        const Scalar margin = 0.5;
        x0 = gd.data.points.col(0).minCoeff() - margin;
        x1 = gd.data.points.col(0).maxCoeff() + margin;
        y0 = gd.data.points.col(1).minCoeff() - margin;
        y1 = gd.data.points.col(1).maxCoeff() + margin;
      } else if (bound_bounds.size() == 4) {
        x0 = bound_bounds[0];
        x1 = bound_bounds[1];
        y0 = bound_bounds[2];
        y1 = bound_bounds[3];
      } else {
        throw std::invalid_argument("--bounds wants xmin,xmax,ymin,ymax");
      }
      const auto grid = nhk::boundary_grid(clf, x0, x1, y0, y1, bound_samples, bound_seed);
      nhk::write_file(bound_out, nhk::boundary_csv(grid));
      std::cout << "wrote " << bound_samples << " classified samples to " << bound_out << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
