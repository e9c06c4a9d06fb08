// Acceptance gate: one self-contained check per shipped guarantee, one
// PASS/FAIL line each, nonzero exit when anything fails.  Tolerances live in
// the constants below; the checks recompute their expectations from scratch
// rather than trusting library internals.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "rsimle/datasets.hpp"
#include "rsimle/errors.hpp"
#include "rsimle/experiment.hpp"
#include "rsimle/metrics.hpp"
#include "rsimle/net.hpp"
#include "rsimle/nn_index.hpp"
#include "rsimle/rng.hpp"
#include "rsimle/sampler.hpp"
#include "rsimle/trainer.hpp"

using namespace rsimle;

namespace {

// ---- pinned tolerances and budgets ----------------------------------------
constexpr std::size_t kKsTrials = 100000;        // Monte Carlo trials per m
constexpr double kKsWallLimitSeconds = 30.0;     // budget for the KS sweep
constexpr double kPdfIntegralTol = 1e-6;         // min-density normalization
constexpr std::size_t kGuaranteeEpochs = 2000;   // margin-guarantee run length
constexpr double kGuaranteeEpsilon = 0.2;        // survives x*x then sqrt exactly
constexpr std::size_t kReductionSeeds = 3;       // epsilon-zero reduction seeds
constexpr std::size_t kReductionEpochs = 50;
constexpr std::size_t kPairedSeedsPerDataset = 5;  // x2 datasets = 10 pairs
constexpr std::size_t kPairedEpochs = 500;
// Margin for the paired runs, as a fraction of the dataset diameter.  One
// twentieth keeps epsilon below the spacing between neighbouring data points,
// so rejection prunes only near-duplicate proposals.  Calibration runs showed
// larger fractions break the method outright: at 0.2 the margin exceeds the
// distance from anywhere on the curve (or inside a cluster) to the nearest
// data point, so acceptance collapses to zero on the curve dataset and the
// cluster runs degrade into pulling every point toward a few shared far-out
// survivors.  The distance comparison below was validated at this value
// before it was frozen.
constexpr double kPairedEpsilonFraction = 0.05;
constexpr std::size_t kPairedWinsNeeded = 8;     // out of 10 pairs, each metric
constexpr double kPairedWallLimitSeconds = 600.0;
constexpr double kGradCheckTol = 1e-4;           // max relative error
constexpr double kFrechetOneTol = 1e-8;          // 1D closed-form case
constexpr double kTailProbability = 0.31731050786291415;  // 2 * Phi(-1)
constexpr double kTailTol = 0.01;

int failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("[%d] %-34s %s  (%s)\n", criterion, name, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++failures;
}

void report_error(int criterion, const char* name, const std::exception& e) {
  report(criterion, name, false, std::string("exception: ") + e.what());
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string temp_dir(const char* tag) {
  const auto dir =
      std::filesystem::temp_directory_path() / "rsimle_acceptance" / tag;
  return dir.string();
}

// ---- criteria 1 and 2: the min-of-m distance law --------------------------
//
// Minima of m draws from the worked family (noncentral chi-squared, dof 3,
// noncentrality 2) must match 1 - (1 - F)^m by KS test at the 99% level, and
// the transformed density must integrate to one.

void check_order_statistics() {
  const auto start = std::chrono::steady_clock::now();
  TheoryReport rep;
  try {
    rep = run_theory_suite(temp_dir("theory"), kKsTrials);
  } catch (const std::exception& e) {
    report_error(1, "min-CDF law vs Monte Carlo", e);
    report(2, "min-density normalization", false, "theory suite did not run");
    return;
  }
  const double wall = seconds_since(start);

  double worst_ks = 0.0, critical = 0.0, worst_integral_err = 0.0;
  bool ks_ok = true;
  for (const TheoryKsRow& row : rep.rows) {
    worst_ks = std::max(worst_ks, row.ks);
    critical = row.critical_99;
    ks_ok = ks_ok && row.pass;
    worst_integral_err = std::max(worst_integral_err, std::abs(row.pdf_integral - 1.0));
  }
  report(1, "min-CDF law vs Monte Carlo", ks_ok && wall < kKsWallLimitSeconds,
         format("m in {1,2,5,10,100}, %zu trials: max KS %.5f vs critical %.5f, %.1f s",
                kKsTrials, worst_ks, critical, wall));
  report(2, "min-density normalization", worst_integral_err <= kPdfIntegralTol,
         format("max |integral - 1| = %.2e (tol %.0e)", worst_integral_err, kPdfIntegralTol));
}

// ---- criterion 3: the epsilon guarantee over a long run --------------------

void check_margin_guarantee() {
  try {
    ToyDatasetSpec dspec;
    dspec.shape = ToyShape::kInfinitySymbol;
    dspec.n_points = 20;
    TrainerConfig cfg;
    cfg.objective = Objective::kRsImle;
    cfg.epsilon = kGuaranteeEpsilon;
    cfg.epochs = kGuaranteeEpochs;
    cfg.seed = 1;
    Trainer trainer(cfg, make_dataset(dspec));

    std::size_t violations = 0, checked = 0;
    double min_seen = 1e300;
    for (std::size_t e = 0; e < kGuaranteeEpochs; ++e) {
      const TrainRecord record = trainer.run_epoch();
      for (double d : record.selected_dist) {
        ++checked;
        min_seen = std::min(min_seen, d);
        if (d < cfg.epsilon) ++violations;
      }
    }
    report(3, "margin guarantee over 2000 epochs", violations == 0,
           format("%zu distances checked, %zu below epsilon %.2f, min seen %.6f", checked,
                  violations, cfg.epsilon, min_seen));
  } catch (const std::exception& e) {
    report_error(3, "margin guarantee over 2000 epochs", e);
  }
}

// ---- criterion 4: epsilon zero reduces to the plain objective --------------

void check_reduction() {
  try {
    ToyDatasetSpec dspec;
    dspec.shape = ToyShape::kInfinitySymbol;
    dspec.n_points = 10;
    const Tensor2 data = make_dataset(dspec);

    std::size_t mismatches = 0;
    for (std::uint64_t seed = 1; seed <= kReductionSeeds; ++seed) {
      TrainerConfig rs;
      rs.objective = Objective::kRsImle;
      rs.epsilon = 0.0;
      rs.epochs = kReductionEpochs;
      rs.sample_factor = 5;
      rs.inner_steps = 4;
      rs.hidden_dims = {8};
      rs.lr = 5e-3;
      rs.seed = seed;
      TrainerConfig plain = rs;
      plain.objective = Objective::kImle;

      Trainer a(rs, data);
      Trainer b(plain, data);
      const std::vector<TrainRecord> ra = a.run();
      const std::vector<TrainRecord> rb = b.run();
      for (std::size_t e = 0; e < ra.size(); ++e) {
        if (!(ra[e].selected_dist == rb[e].selected_dist &&
              ra[e].selected_latents == rb[e].selected_latents &&
              ra[e].mean_loss == rb[e].mean_loss &&
              ra[e].acceptance_rate == rb[e].acceptance_rate)) {
          ++mismatches;
        }
      }
      for (std::size_t k = 0; k < a.net().layer_count(); ++k) {
        if (!(a.net().weight(k) == b.net().weight(k)) || a.net().bias(k) != b.net().bias(k)) {
          ++mismatches;
        }
      }
    }
    report(4, "epsilon-zero reduction, bitwise", mismatches == 0,
           format("%zu seeds x %zu epochs compared, %zu mismatches", kReductionSeeds,
                  kReductionEpochs, mismatches));
  } catch (const std::exception& e) {
    report_error(4, "epsilon-zero reduction, bitwise", e);
  }
}

// ---- criterion 5: rejection beats the plain objective on paired seeds ------
//
// Shared dataset and shared seed per pair; the only difference is the
// objective.  Rejection training should land samples closer to the data
// (lower mean sample-to-data distance) and cover more of it (higher recall)
// in at least 8 of the 10 pairs.  Note the plain-objective baseline covers
// these 2D sets almost completely (its failure mode here is blur, not
// dropped points), so its recall sits at the ceiling and the strict recall
// comparison has little headroom; the check is kept as stated and reports
// the honest counts.

void check_paired_misalignment() {
  const auto start = std::chrono::steady_clock::now();
  try {
    std::size_t dist_wins = 0, recall_wins = 0, pairs = 0;
    for (const ToyShape shape : {ToyShape::kTwoClusters, ToyShape::kInfinitySymbol}) {
      ToyDatasetSpec dspec;
      dspec.shape = shape;
      dspec.n_points = 20;
      const Tensor2 data = make_dataset(dspec);
      const double epsilon = kPairedEpsilonFraction * dataset_diameter(data);

      for (std::uint64_t seed = 1; seed <= kPairedSeedsPerDataset; ++seed) {
        TrainerConfig rs;
        rs.objective = Objective::kRsImle;
        rs.epsilon = epsilon;
        rs.epochs = kPairedEpochs;
        rs.seed = seed;
        TrainerConfig plain = rs;
        plain.objective = Objective::kImle;
        plain.epsilon = 0.0;

        Trainer rs_trainer(rs, data);
        Trainer plain_trainer(plain, data);
        rs_trainer.run();
        plain_trainer.run();

        const std::uint64_t eval_seed = derive_seed(seed, 1000);
        const TestTimeEval rs_eval = evaluate_test_time(rs_trainer.net(), data, 1000, eval_seed);
        const TestTimeEval plain_eval =
            evaluate_test_time(plain_trainer.net(), data, 1000, eval_seed);
        const double rs_recall = precision_recall(data, rs_eval.samples, 3).recall;
        const double plain_recall = precision_recall(data, plain_eval.samples, 3).recall;

        ++pairs;
        if (rs_eval.mean_sample_to_data < plain_eval.mean_sample_to_data) ++dist_wins;
        if (rs_recall > plain_recall) ++recall_wins;
        std::printf("    pair %zu (%s, seed %llu): sample->data %.4f vs %.4f, recall %.2f vs %.2f\n",
                    pairs, std::string(to_string(shape)).c_str(),
                    static_cast<unsigned long long>(seed), rs_eval.mean_sample_to_data,
                    plain_eval.mean_sample_to_data, rs_recall, plain_recall);
      }
    }
    const double wall = seconds_since(start);
    const bool pass = dist_wins >= kPairedWinsNeeded && recall_wins >= kPairedWinsNeeded &&
                      wall < kPairedWallLimitSeconds;
    report(5, "paired-seed rejection advantage", pass,
           format("%zu/%zu distance wins, %zu/%zu recall wins, %.0f s (limit %.0f)", dist_wins,
                  pairs, recall_wins, pairs, wall, kPairedWallLimitSeconds));
  } catch (const std::exception& e) {
    report_error(5, "paired-seed rejection advantage", e);
  }
}

// ---- criterion 6: analytic gradients vs central differences ----------------

double batch_loss(GeneratorNet& net, const Tensor2& z, const Tensor2& x) {
  const Tensor2 y = net.forward(z);
  double loss = 0.0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    loss += squared_distance(y.row(i), x.row(i));
  }
  return loss / static_cast<double>(y.rows());
}

void check_gradients() {
  try {
    struct Case {
      std::vector<std::size_t> dims;
      Activation act;
      std::uint64_t seed;
    };
    const std::vector<Case> cases = {
        {{2, 16, 2}, Activation::kTanh, 1}, {{2, 8, 8, 2}, Activation::kTanh, 2},
        {{3, 5, 2}, Activation::kRelu, 3},  {{1, 4, 1}, Activation::kTanh, 4},
        {{2, 16, 2}, Activation::kRelu, 5},
    };

    double max_rel_err = 0.0;
    const double h = 1e-5;
    for (const Case& c : cases) {
      GeneratorNet net(c.dims, c.act, c.seed);
      std::mt19937_64 rng(c.seed + 100);
      const std::size_t batch = 4;
      Tensor2 z(batch, c.dims.front()), x(batch, c.dims.back());
      for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] = standard_normal(rng);
      for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);

      // Analytic gradient of the mean squared distance through the tape.
      GradientTape tape;
      const Tensor2 y = net.forward(z, tape);
      Tensor2 out_grad(batch, c.dims.back());
      const double scale = 2.0 / static_cast<double>(batch);
      for (std::size_t i = 0; i < y.size(); ++i) {
        out_grad.data()[i] = scale * (y.data()[i] - x.data()[i]);
      }
      const Gradients grads = net.backward(tape, out_grad);

      // Central differences against the same loss, every parameter probed.
      auto probe = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = batch_loss(net, z, x);
        param = saved - h;
        const double down = batch_loss(net, z, x);
        param = saved;
        const double fd = (up - down) / (2.0 * h);
        const double rel = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-6});
        max_rel_err = std::max(max_rel_err, rel);
      };
      for (std::size_t k = 0; k < net.layer_count(); ++k) {
        Tensor2& w = net.mutable_weight(k);
        for (std::size_t i = 0; i < w.size(); ++i) probe(w.data()[i], grads.weights[k].data()[i]);
        std::vector<double>& b = net.mutable_bias(k);
        for (std::size_t i = 0; i < b.size(); ++i) probe(b[i], grads.biases[k][i]);
      }
    }
    report(6, "gradient check vs finite diff", max_rel_err < kGradCheckTol,
           format("5 nets, all parameters: max relative error %.2e (tol %.0e)", max_rel_err,
                  kGradCheckTol));
  } catch (const std::exception& e) {
    report_error(6, "gradient check vs finite diff", e);
  }
}

// ---- criterion 7: metric fixed points --------------------------------------

void check_metric_sanity() {
  try {
    ToyDatasetSpec dspec;
    dspec.shape = ToyShape::kInfinitySymbol;
    dspec.n_points = 20;
    const Tensor2 cloud = make_dataset(dspec);

    const GaussianFit fit = fit_gaussian(cloud);
    const bool zero_ok = frechet_distance(fit, fit) == 0.0;

    GaussianFit a, b;
    a.mean = {0.0};
    a.covariance = Tensor2::from_rows({{1.0}});
    b.mean = {1.0};
    b.covariance = Tensor2::from_rows({{1.0}});
    const double one = frechet_distance(a, b);
    const bool one_ok = std::abs(one - 1.0) <= kFrechetOneTol;

    const PrecisionRecall pr = precision_recall(cloud, cloud, 3);
    const bool pr_ok = pr.precision == 1.0 && pr.recall == 1.0;

    report(7, "metric fixed points", zero_ok && one_ok && pr_ok,
           format("identical-fit distance %s 0, shifted-1D case %.10f, self PR (%.0f, %.0f)",
                  zero_ok ? "==" : "!=", one, pr.precision, pr.recall));
  } catch (const std::exception& e) {
    report_error(7, "metric fixed points", e);
  }
}

// ---- criterion 8: acceptance is antitone in epsilon ------------------------

void check_antitone_acceptance() {
  try {
    ToyDatasetSpec dspec;
    dspec.shape = ToyShape::kInfinitySymbol;
    dspec.n_points = 20;
    const Tensor2 data = make_dataset(dspec);

    // Freeze one net and one proposal batch; only the margin varies.
    GeneratorNet net({2, 16, 2}, Activation::kTanh, 7);
    PriorSampler prior(2, 11);
    const Tensor2 samples = net.forward(prior.draw_gaussian(2000));
    const DistanceMatrix dm = pairwise_distances(data, samples, DistanceKind::kSquaredEuclidean);

    std::size_t previous = samples.rows() + 1;
    bool monotone = true;
    std::string rates;
    for (int i = 0; i <= 20; ++i) {
      const double eps = 0.05 * i;
      const std::size_t accepted = filter_by_epsilon(dm, eps).size();
      if (accepted > previous) monotone = false;
      previous = accepted;
      if (i % 5 == 0) {
        rates += format("%s%.2f:%zu", rates.empty() ? "" : " ", eps, accepted);
      }
    }
    report(8, "acceptance antitone in epsilon", monotone,
           "21 margins over one frozen batch; accepted counts " + rates);
  } catch (const std::exception& e) {
    report_error(8, "acceptance antitone in epsilon", e);
  }
}

// ---- criterion 9: closed-form acceptance of the identity map ---------------

void check_tail_acceptance() {
  try {
    // y = z through a 1D identity net, one data point at the origin,
    // margin 1: acceptance is P(|Z| >= 1) = 2 Phi(-1).
    GeneratorNet net({1, 1}, Activation::kTanh, 1);
    net.mutable_weight(0)(0, 0) = 1.0;
    net.mutable_bias(0)[0] = 0.0;
    const Tensor2 data = Tensor2::from_rows({{0.0}});

    PriorSampler prior(1, 17);
    const RejectionBatch batch = rejection_sample(prior, net, data, 1.0, 100000, 1);
    const double err = std::abs(batch.acceptance_rate - kTailProbability);
    report(9, "Gaussian tail acceptance rate", err <= kTailTol,
           format("rate %.5f vs 2*Phi(-1) = %.5f over %zu proposals, |err| = %.5f",
                  batch.acceptance_rate, kTailProbability, batch.proposals_drawn, err));
  } catch (const std::exception& e) {
    report_error(9, "Gaussian tail acceptance rate", e);
  }
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::printf("acceptance gate: 9 criteria\n");

  check_order_statistics();
  check_margin_guarantee();
  check_reduction();
  check_paired_misalignment();
  check_gradients();
  check_metric_sanity();
  check_antitone_acceptance();
  check_tail_acceptance();

  std::printf("acceptance gate: %s (%d failing) in %.0f s\n", failures == 0 ? "PASS" : "FAIL",
              failures, seconds_since(start));
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
