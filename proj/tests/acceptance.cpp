#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "proxcalc/cli.hpp"
#include "proxcalc/proxcalc.hpp"

using namespace proxcalc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

bool run_criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || dt < budget_s;
  const bool pass = o.pass && in_time;
  std::printf("criterion %d %s: %s (%s; %.2f s%s)\n", id, name.c_str(), pass ? "PASS" : "FAIL", o.detail.c_str(),
              dt, in_time ? "" : ", over time budget");
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<fixture::Named> closed_form_pairs(int n) {
  std::vector<fixture::Named> out;
  for (auto& e : fixture::catalog(n)) {
    for (const char* name : {"quadratic", "half_sq_norm", "scaled_norm", "indicator_point", "indicator_ball",
                             "indicator_box", "support_ball", "support_box"})
      if (e.name == name) out.push_back(e);
  }
  return out;
}

Outcome moreau_decomposition() {
  double closed = 0.0, numerical = 0.0;
  int pairs = 0, points = 0;
  for (int n : {1, 2, 3}) {
    Lcg64 rng(100 + n);
    const auto fs = closed_form_pairs(n);
    pairs += static_cast<int>(fs.size());
    for (const auto& e : fs) {
      for (const auto& x : sample_ball(rng, n, 5.0, 200)) {
        closed = std::max(closed, moreau_decomposition_residual(e.f, x));
        numerical = std::max(numerical, moreau_decomposition_residual(e.f, x, {}, ProxRoute::numerical));
        ++points;
      }
    }
  }
  Outcome o;
  o.pass = pairs == 24 && closed <= 1e-8 && numerical <= 1e-4;
  o.detail = std::to_string(pairs) + " pairs, " + std::to_string(points) + " points, closed-form max " +
             fmt("%.2e", closed) + ", numerical max " + fmt("%.2e", numerical);
  return o;
}

Outcome envelope_gradient_fd() {
  double worst = 0.0;
  int functions = 0;
  for (int n : {1, 2, 3}) {
    Lcg64 rng(200 + n);
    for (const auto& e : fixture::catalog(n)) {
      ++functions;
      const double lambda = 0.8;
      for (const auto& x : sample_ball(rng, n, 5.0, 100)) {
        const Vector g = envelope_gradient(e.f, lambda, x);
        const Vector fd = oracle::fd_gradient([&](const Vector& z) { return moreau_envelope(e.f, lambda, z); }, x);
        worst = std::max(worst, (g - fd).norm() / std::max(1.0, fd.norm()));
      }
    }
  }
  return {worst <= 1e-4, std::to_string(functions) + " functions x 100 points, max relative gap " + fmt("%.2e", worst)};
}

Outcome envelope_conjugate() {
  struct Case {
    std::string name;
    ConvexFunction f;
  };
  const auto cases = [](int n) {
    const Vector c = fixture::vec(n, {0.4, -0.7});
    return std::vector<Case>{
        {"half_sq_norm", ConvexFunction::half_sq_norm(c)},
        {"scaled_norm", ConvexFunction::scaled_norm(1.5, c)},
        {"support_box", ConvexFunction::support_box(-Vector::Ones(n), Vector::Ones(n))},
        {"indicator_box", ConvexFunction::indicator_box(-Vector::Ones(n), Vector::Ones(n))},
    };
  };
  const std::vector<std::pair<int, SampleGrid>> grids = {{1, SampleGrid::cube(1, -8, 8, 1601)},
                                                         {2, SampleGrid::cube(2, -5, 5, 161)}};
  int ok1 = 0, ok2 = 0;
  double worst = 0.0;
  std::string failed;
  for (const auto& [n, grid] : grids) {
    Lcg64 rng(300 + n);
    const auto queries = sample_ball(rng, n, 0.9, 20);
    for (const auto& [name, f] : cases(n)) {
      const CheckReport r = verify_envelope_conjugate(f, 0.7, grid, queries, 2e-3);
      worst = std::max(worst, r.conclusion_residual);
      if (r.status == CheckStatus::verified && r.conclusion_residual <= 2e-3)
        ++(n == 1 ? ok1 : ok2);
      else
        failed += " " + name + "/" + std::to_string(n) + "D";
    }
  }
  Outcome o;
  o.pass = ok1 >= 3 && ok2 >= 2 && failed.empty();
  o.detail = std::to_string(ok1) + " functions in 1D, " + std::to_string(ok2) + " in 2D, max gap " +
             fmt("%.2e", worst) + (failed.empty() ? "" : ", failed:" + failed);
  return o;
}

bool reconstruction_round_trip(int n) {
  const Vector c = fixture::vec(n, {-0.7, 0.5});
  const Vector a = Vector::Constant(n, 0.3);
  std::vector<std::pair<std::string, ConvexFunction>> fs = {
      {"half_sq_norm", ConvexFunction::half_sq_norm(c)},
      {"scaled_norm", ConvexFunction::norm(n, 1.5)},
      {"norm_plus_linear", ConvexFunction::tilt(ConvexFunction::norm(n), -a)},
  };
  for (int i = 0; i < 3; ++i) fs.push_back({"envelope_" + fs[i].first, ConvexFunction::envelope(fs[i].second, 0.8)});
  const SampleGrid grid = n == 1 ? SampleGrid::cube(1, -8, 8, 1601) : SampleGrid::cube(2, -5, 5, 161);
  Lcg64 rng(400 + n);
  const auto queries = sample_ball(rng, n, 1.5, 25);
  bool all = true;
  for (const auto& [name, f] : fs) {
    const auto t0 = Clock::now();
    ReconstructionTask task{catalog_oracle(f), Vector::Zero(n), std::nullopt, grid, queries, {}};
    std::string detail;
    bool pass = true;
    try {
      const ReconstructionReport r = reconstruct(task);
      const double f0 = evaluate(f, Vector::Zero(n)).value();
      double worst = 0.0;
      int interior = 0;
      for (const auto& v : r.recovered) {
        if (v.boundary_argmax) continue;
        ++interior;
        worst = std::max(worst, std::abs(v.value - (evaluate(f, v.point).value() - f0)));
      }
      const IntegrationOptions& io = task.integration;
      const bool field = r.monotonicity_residual <= io.monotone_tol && r.firm_nonexpansive_residual <= io.firm_tol &&
                         r.gradient_symmetry_residual <= io.symmetry_tol;
      pass = interior >= 20 && worst <= 2e-3 && field;
      detail = std::to_string(interior) + " interior queries, max error " + fmt("%.2e", worst) +
               (field ? "" : ", field pre-checks failed");
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    pass = pass && dt < 60.0;
    std::printf("  %dD %-24s %s %s, %.2f s\n", n, name.c_str(), pass ? "ok" : "FAILED", detail.c_str(), dt);
    all = all && pass;
  }
  return all;
}

Outcome reconstruction() {
  const bool one = reconstruction_round_trip(1);
  const bool two = reconstruction_round_trip(2);
  return {one && two, "6 functions in 1D and 6 in 2D, each under 60 s"};
}

Outcome comparison_cross_product() {
  int pairs = 0, hypothesis_holds = 0, counterexamples = 0;
  double worst = 0.0;
  for (int n : {1, 2}) {
    const auto cat = fixture::catalog(n);
    Lcg64 rng(500 + n);
    const auto xs = sample_ball(rng, n, 5.0, 100);
    for (const auto& ef : cat) {
      for (const auto& eg : cat) {
        std::vector<Vector> anchors = {Vector::Zero(n)};
        for (const Vector* p : {&ef.inside, &eg.inside})
          if (p->size()) anchors.push_back(*p);
        for (const auto& x0 : anchors) {
          if (evaluate(ef.f, x0).is_infinite() || evaluate(eg.f, x0).is_infinite()) continue;
          const CheckReport r = check_comparison(ef.f, eg.f, x0, xs, 1e-6);
          ++pairs;
          if (r.status == CheckStatus::counterexample) ++counterexamples;
          if (r.hypothesis_residual <= r.tolerance) {
            ++hypothesis_holds;
            worst = std::max(worst, r.conclusion_residual);
          }
          break;
        }
      }
    }
  }
  Outcome o;
  o.pass = pairs >= 25 && counterexamples == 0 && worst <= 1e-6;
  o.detail = std::to_string(pairs) + " ordered pairs, " + std::to_string(hypothesis_holds) +
             " with the hypothesis holding, max conclusion residual there " + fmt("%.2e", worst) + ", " +
             std::to_string(counterexamples) + " counterexamples";
  return o;
}

Outcome lipschitz() {
  const int n = 2;
  Lcg64 rng(600);
  const auto xs = sample_ball(rng, n, 5.0, 200);
  const auto ys = sample_ball(rng, n, 5.0, 20);
  const CheckReport norm = check_lipschitz(ConvexFunction::norm(n), 1.0, xs, ys);

  const ConvexFunction half_sq = ConvexFunction::half_sq_norm(Vector::Zero(n));
  const CheckReport sq = check_lipschitz(half_sq, 1.0, xs, {Vector::Zero(n)});
  bool witness = false;
  double witness_norm = 0.0;
  for (const auto& w : sq.witnesses) {
    if (w.point.size() != 2 * n) continue;
    const Vector x = w.point.head(n), y = w.point.tail(n);
    const double violation = x.norm() - 1.0 - (prox(half_sq, 1.0, x + y).minimizer - y).norm();
    if (violation > 0.0 && x.norm() >= 2.0 + 1e-6) {
      witness = true;
      witness_norm = x.norm();
      break;
    }
  }
  std::vector<double> lhat;
  Lcg64 grow(601);
  for (double radius : {0.5, 1.0, 2.0, 4.0, 8.0})
    lhat.push_back(sampled_lipschitz_constant(half_sq, sample_ball(grow, n, radius, 200)));
  bool grows = lhat.back() > 1.0;
  for (std::size_t i = 1; i < lhat.size(); ++i) grows = grows && lhat[i] > lhat[i - 1];

  Outcome o;
  o.pass = norm.status == CheckStatus::verified && norm.theorem_consistent && sq.theorem_consistent &&
           sq.status == CheckStatus::counterexample && witness && grows;
  o.detail = std::string("norm ") + to_string(norm.status) + ", half square " + to_string(sq.status) +
             (witness ? ", witness with ||x|| = " + fmt("%.4f", witness_norm) : ", no witness") +
             ", sampled constants " + fmt("%.3f", lhat.front()) + " .. " + fmt("%.3f", lhat.back());
  return o;
}

bool items_agree(const EquivalenceReport& r) {
  std::optional<ItemState> seen;
  for (const auto& item : r.items) {
    if (item.state == ItemState::skipped) continue;
    if (seen && *seen != item.state) return false;
    seen = item.state;
  }
  return seen.has_value();
}

Outcome equivalences() {
  const int n = 2;
  const Vector z = Vector::Zero(n);
  const Vector c = fixture::v2(0.4, -0.7);
  const ConvexFunction norm = ConvexFunction::norm(n);
  const ConvexFunction half_sq = ConvexFunction::half_sq_norm(z);
  const ConvexFunction ball = ConvexFunction::indicator_ball(z, 1.0);
  const ConvexFunction box = ConvexFunction::indicator_box(-Vector::Ones(n), Vector::Ones(n));
  const ConvexFunction sbox = ConvexFunction::support_box(-Vector::Ones(n), Vector::Ones(n));
  const ConvexFunction quad = ConvexFunction::quadratic(fixture::spd(n, 11), fixture::v2(0.5, -1.0));
  const std::vector<std::pair<ConvexFunction, ConvexFunction>> pairs = {
      {norm, ConvexFunction::add_const(norm, 2.0)},
      {half_sq, half_sq},
      {half_sq, ConvexFunction::add_const(half_sq, -1.0)},
      {sbox, ConvexFunction::add_const(sbox, 0.5)},
      {ball, ConvexFunction::add_const(ball, 3.0)},
      {ConvexFunction::envelope(norm, 0.6), ConvexFunction::envelope(norm, 0.6)},
      {quad, ConvexFunction::add_const(quad, 1.25)},
      {norm, half_sq},
      {norm, ConvexFunction::norm(n, 2.0)},
      {ball, box},
      {half_sq, ConvexFunction::half_sq_norm(c)},
      {sbox, ConvexFunction::support_ball(z, 1.0)},
      {quad, half_sq},
  };
  Lcg64 rng(700);
  const auto xs = sample_ball(rng, n, 5.0, 200);
  int passing = 0, agreeing = 0, all_hold = 0, counterexamples = 0;
  for (const auto& [f, g] : pairs) {
    const EquivalenceReport r = check_equivalences(f, g, xs);
    if (r.report.status == CheckStatus::counterexample) ++counterexamples;
    if (!r.precondition_holds) continue;
    ++passing;
    if (!items_agree(r)) continue;
    ++agreeing;
    if (r.items[4].state == ItemState::holds) ++all_hold;
  }
  const EquivalenceReport sharp = check_equivalences(ConvexFunction::indicator_point(fixture::v2(1, 0)),
                                                     ConvexFunction::indicator_point(fixture::v2(0, 1)), xs);
  const bool example = sharp.items[0].state == ItemState::holds && sharp.items[4].state == ItemState::fails &&
                       sharp.report.status == CheckStatus::precondition_violated;
  Outcome o;
  o.pass = passing >= 10 && agreeing == passing && counterexamples == 0 && example;
  o.detail = std::to_string(agreeing) + " of " + std::to_string(passing) +
             " precondition-passing pairs agree (" +
             std::to_string(all_hold) + " all hold, " + std::to_string(agreeing - all_hold) +
             " all fail), point-indicator pair: (i) " + to_string(sharp.items[0].state) +
             ", (v) " + to_string(sharp.items[4].state) + ", " + to_string(sharp.report.status);
  return o;
}

Outcome support_distance() {
  double worst = 0.0;
  int verified = 0, total = 0;
  for (int n : {1, 2, 3}) {
    Lcg64 rng(800 + n);
    const Vector z = Vector::Zero(n);
    for (const ConvexFunction& set : {ConvexFunction::indicator_ball(z, 1.0),
                                      ConvexFunction::indicator_box(-Vector::Ones(n), Vector::Ones(n)),
                                      ConvexFunction::indicator_point(z)}) {
      const CheckReport r = check_support_distance(conjugate_closed_form(set), set, sample_ball(rng, n, 5.0, 200));
      ++total;
      if (r.status == CheckStatus::verified && r.conclusion_residual <= 1e-8 && r.hypothesis_residual <= 1e-8)
        ++verified;
      worst = std::max({worst, r.conclusion_residual, r.hypothesis_residual});
    }
  }
  return {verified == total,
          std::to_string(verified) + " of " + std::to_string(total) + " set/dimension cases verified, max residual " +
              fmt("%.2e", worst)};
}

Outcome determinism(const std::string& samples_dir) {
  cli::RunConfig c;
  c.command = "verify-all";
  c.f_spec = samples_dir + "/half_sq2d.json";
  c.g_spec = c.f_spec;
  c.anchor = "0";
  c.seed = 7;
  std::ostringstream a, b, err;
  const int ca = cli::run(c, a, err);
  const int cb = cli::run(c, b, err);
  const bool same = a.str() == b.str() && !a.str().empty();
  return {same && ca == 0 && cb == 0, std::string(same ? "identical" : "different") + " reports of " +
                                          std::to_string(a.str().size()) + " bytes, exit codes " +
                                          std::to_string(ca) + " and " + std::to_string(cb)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string samples_dir = argc > 1 ? argv[1] : PROXCALC_SAMPLES_DIR;
  bool ok = true;
  ok &= run_criterion(1, "moreau decomposition", 10.0, moreau_decomposition);
  ok &= run_criterion(2, "envelope gradient", 5.0, envelope_gradient_fd);
  ok &= run_criterion(3, "envelope conjugate", 30.0, envelope_conjugate);
  ok &= run_criterion(4, "reconstruction round trip", 0.0, reconstruction);
  ok &= run_criterion(5, "comparison principle", 0.0, comparison_cross_product);
  ok &= run_criterion(6, "lipschitz characterization", 0.0, lipschitz);
  ok &= run_criterion(7, "five-way equivalence", 0.0, equivalences);
  ok &= run_criterion(8, "support distance", 0.0, support_distance);
  ok &= run_criterion(9, "determinism", 0.0, [&] { return determinism(samples_dir); });
  return ok ? 0 : 1;
}
