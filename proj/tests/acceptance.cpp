// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hmp/cayley_basis.hpp"
#include "hmp/error.hpp"
#include "hmp/nevanlinna.hpp"
#include "hmp/oracle.hpp"
#include "hmp/transform.hpp"

namespace {

using namespace hmp;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct RandomCase {
  AtomicMatrixMeasure measure;
  int block_size;
};

std::vector<RandomCase> random_cases() {
  std::vector<RandomCase> cases;
  for (int block = 1; block <= 3; ++block)
    for (int atoms = 1; atoms <= 5; ++atoms) {
      const std::uint64_t seed = 1000 + 17 * static_cast<std::uint64_t>(block) + atoms;
      cases.push_back({oracle::random_atomic_measure(seed, block, atoms), block});
    }
  return cases;
}

const MomentSequence& lognormal() {
  static const MomentSequence seq = oracle::lognormal_moments(129, 256);
  return seq;
}

AtomicMatrixMeasure two_atom() {
  AtomicMatrixMeasure m;
  for (double x : {-1.0, 1.0}) {
    m.atoms.emplace_back(x);
    CMatrix w(1, 1);
    w(0, 0) = make_complex(0.5);
    m.weights.push_back(w);
  }
  return m;
}

const MomentSequence& block_example() {
  static const MomentSequence seq = oracle::block_diagonal(
      oracle::lognormal_moments(129, 256), oracle::atomic_moments(two_atom(), 129, 256));
  return seq;
}

std::vector<Complex> to_grid(const std::vector<std::complex<double>>& pts, unsigned bits) {
  PrecisionScope scope(bits);
  std::vector<Complex> g;
  for (const auto& p : pts) g.push_back(make_complex(p.real(), p.imag()));
  return g;
}

Outcome solvability_gate() {
  Outcome o;
  const auto t0 = Clock::now();
  int solvable = 0;
  const std::vector<RandomCase> cases = random_cases();
  for (const RandomCase& c : cases) {
    const SolvabilityReport r = validate_solvability(oracle::atomic_moments(c.measure, 9), 4);
    if (r.verdict == SolvabilityVerdict::kSolvable && r.checked_depth == 4) ++solvable;
  }
  o.require(cases.size() >= 10, "at least 10 random cases");
  o.require(solvable == static_cast<int>(cases.size()), "every random case solvable");

  PrecisionScope scope(kDefaultPrecisionBits);
  std::vector<CMatrix> s;
  for (double v : {1.0, 0.0, -1.0}) {
    CMatrix m(1, 1);
    m(0, 0) = make_complex(v);
    s.push_back(m);
  }
  const SolvabilityReport bad = validate_solvability(MomentSequence::create(1, s));
  o.require(bad.verdict == SolvabilityVerdict::kRejected && bad.rejected_order == 1,
            "indefinite sequence rejected at order 1");
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime < 1 s");
  o.detail << solvable << "/" << cases.size() << " random solvable; indefinite rejected at order "
           << bad.rejected_order << "; " << dt << " s";
  return o;
}

Outcome finite_rank_determinacy() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Case {
    const char* name;
    MomentSequence seq;
  };
  const Case cases[] = {
      {"two-atom", oracle::atomic_moments(two_atom(), 8)},
      {"3-atom N=2", oracle::atomic_moments(oracle::random_atomic_measure(7, 2, 3), 24)},
  };
  for (const Case& c : cases) {
    const DeterminacyVerdict v = classify_determinacy(c.seq);
    const SectionEvidence& e = v.history.back();
    double worst = 0.0;
    for (double r : e.residual_a) worst = std::max(worst, std::abs(r));
    o.require(v.verdict == Verdict::kDeterminate, std::string(c.name) + " determinate");
    o.require(e.section_size >= 2 * e.rank, std::string(c.name) + " M >= 2 rank");
    o.require(worst < 1e-10, std::string(c.name) + " side-a residual < 1e-10");
    o.detail << c.name << ": M=" << e.section_size << " rank=" << e.rank
             << " max|res_a|=" << worst << "; ";
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime < 1 s");
  o.detail << dt << " s";
  return o;
}

Outcome indeterminate_lognormal() {
  Outcome o;
  const auto t0 = Clock::now();
  DeterminacyPolicy policy;
  policy.initial_section = 16;
  policy.max_section = 64;
  const DeterminacyVerdict v = classify_determinacy(lognormal(), policy);
  o.require(v.verdict == Verdict::kIndeterminate, "indeterminate verdict");
  double r32 = 0.0, r64 = 0.0;
  for (const SectionEvidence& e : v.history) {
    if (e.section_size == 32) r32 = e.residual_a[0];
    if (e.section_size == 64) r64 = e.residual_a[0];
  }
  const double change = std::abs(r64 - r32) / r64;
  o.require(r64 > 0.0 && change < 0.01, "residual stable to 1% between 32 and 64");

  const auto [plain, perturbed] = oracle::lognormal_pair(0.5);
  const MomentSequence a = oracle::quadrature_moments(plain, 13);
  const MomentSequence b = oracle::quadrature_moments(perturbed, 13);
  double worst = 0.0;
  for (int n = 0; n <= 12; ++n) {
    const double x = to_double(real(a.moment(n)(0, 0)));
    const double y = to_double(real(b.moment(n)(0, 0)));
    worst = std::max(worst, std::abs(x - y) / std::abs(x));
  }
  const std::complex<double> probe(1.0, 0.1);
  const double separation = std::abs(oracle::direct_transform(plain, probe)(0, 0) -
                                     oracle::direct_transform(perturbed, probe)(0, 0));
  o.require(worst < 1e-9, "pair moments agree within 1e-9");
  o.require(separation > 1e-6, "pair measures are distinct");
  const double dt = seconds_since(t0);
  o.require(dt < 60.0, "runtime < 60 s");
  o.detail << "res(32)=" << r32 << " res(64)=" << r64 << " change=" << change
           << "; pair moment gap=" << worst << " transform gap=" << separation << "; " << dt
           << " s";
  return o;
}

Outcome unique_solution_recovery() {
  Outcome o;
  constexpr unsigned kBits = kDefaultPrecisionBits;
  std::vector<RandomCase> cases = random_cases();
  cases.push_back({two_atom(), 1});
  int recovered = 0;
  double worst_atom = 0.0, worst_weight = 0.0, worst_moment = 0.0;
  for (const RandomCase& c : cases) {
    const MomentSequence seq = oracle::atomic_moments(c.measure, 16, kBits);
    const GramModel model = embed(seq, seq.max_section());
    const CayleyBasis basis = orthogonalize(model);
    if (basis.delta() != 0 || basis.omega() != 0) {
      o.require(false, "finite-rank case without defect");
      continue;
    }
    const AtomicMatrixMeasure m = unique_solution_atoms(model, basis);
    if (m.atoms.size() != c.measure.atoms.size()) {
      o.require(false, "atom count");
      continue;
    }
    PrecisionScope scope(kBits);
    double atom_err = 0.0, weight_err = 0.0;
    for (std::size_t s = 0; s < m.atoms.size(); ++s) {
      std::size_t best = 0;
      for (std::size_t t = 1; t < c.measure.atoms.size(); ++t)
        if (abs(c.measure.atoms[t] - m.atoms[s]) < abs(c.measure.atoms[best] - m.atoms[s]))
          best = t;
      atom_err = std::max(atom_err, to_double(abs(c.measure.atoms[best] - m.atoms[s])));
      weight_err = std::max(
          weight_err, to_double(spectral_norm(CMatrix(m.weights[s] - c.measure.weights[best]))));
    }
    const MomentSequence again = oracle::atomic_moments(m, 16, kBits);
    double moment_err = 0.0;
    for (int n = 0; n < 16; ++n) {
      const Real scale = max(Real(1), max_abs(seq.moment(n)));
      moment_err = std::max(
          moment_err, to_double(max_abs(CMatrix(again.moment(n) - seq.moment(n))) / scale));
    }
    worst_atom = std::max(worst_atom, atom_err);
    worst_weight = std::max(worst_weight, weight_err);
    worst_moment = std::max(worst_moment, moment_err);
    if (atom_err <= 1e-6 && weight_err <= 1e-6 && moment_err <= 1e-8) ++recovered;
  }
  o.require(recovered == static_cast<int>(cases.size()), "every case recovered");
  o.detail << recovered << "/" << cases.size() << " recovered; atom err " << worst_atom
           << ", weight err " << worst_weight << ", moment err " << worst_moment;
  return o;
}

Outcome schur_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  const GramModel model = embed(lognormal(), 64);
  const StructureMatrices sm = structure_matrices(orthogonalize(model), model);
  o.require(sm.tau() <= 64, "tau <= 64");
  const Eigen::MatrixXcd v = to_double(sm.frak_v);
  const Eigen::MatrixXcd w = to_double(sm.w);
  const Eigen::MatrixXcd t = to_double(sm.t);
  const Eigen::MatrixXcd gen = to_double(sm.c0_generator);
  const Eigen::Index tau = sm.tau(), delta = sm.delta(), omega = sm.omega();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const std::complex<double> z(-3.0 + 6.0 * unit(rng), 0.2 + 2.8 * unit(rng));
    const std::complex<double> zeta = (z - std::complex<double>(0, 1)) /
                                      (z + std::complex<double>(0, 1));
    Eigen::MatrixXcd f(omega, delta);
    for (Eigen::Index i = 0; i < omega; ++i)
      for (Eigen::Index j = 0; j < delta; ++j)
        f(i, j) = std::polar(unit(rng), 2.0 * M_PI * unit(rng));
    const double norm = f.jacobiSvd().singularValues()(0);
    if (norm > 1.0) f /= norm;
    Eigen::MatrixXcd full(tau + delta, tau + delta);
    full.topLeftCorner(tau, tau) = Eigen::MatrixXcd::Identity(tau, tau) - zeta * v;
    full.topRightCorner(tau, delta) = -zeta * w * f;
    full.bottomLeftCorner(delta, tau) = -zeta * gen;
    full.bottomRightCorner(delta, delta) = Eigen::MatrixXcd::Identity(delta, delta) - zeta * t * f;
    const Eigen::MatrixXcd direct = full.fullPivLu().inverse().topLeftCorner(tau, tau);
    const Eigen::MatrixXcd formula = schur_leading_block(sm, zeta, f);
    worst = std::max(worst, (direct - formula).cwiseAbs().maxCoeff());
  }
  const double dt = seconds_since(t0);
  o.require(worst < 1e-10, "agreement within 1e-10");
  o.require(dt < 10.0, "runtime < 10 s");
  o.detail << "tau=" << tau << " max diff " << worst << "; " << dt << " s";
  return o;
}

SchurParameter random_contraction(std::uint64_t seed) {
  return SchurParameter::evaluator([seed](const Complex&, int rows, int cols) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
    const double norm = rows * cols == 0 ? 1.0 : m.jacobiSvd().singularValues()(0);
    return from_double(m * (0.9 / std::max(norm, 1e-300)));
  });
}

Outcome herglotz_suite() {
  Outcome o;
  std::vector<std::complex<double>> pts;
  for (double x : {-2.0, -0.5, 0.5, 2.0})
    for (double y : {0.3, 1.5, 4.0}) pts.emplace_back(x, y);
  const std::pair<const char*, SchurParameter> params[] = {
      {"0", SchurParameter::zero()},
      {"+1", SchurParameter::scalar(1.0)},
      {"-1", SchurParameter::scalar(-1.0)},
      {"random", random_contraction(77)},
  };
  for (const auto& [label, seq] :
       {std::pair<const char*, const MomentSequence*>{"lognormal", &lognormal()},
        {"block-diagonal", &block_example()}}) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [fname, f] : params) {
      const ConvergedTransform ct = convergence_driver(*seq, to_grid(pts, 256), f);
      const HerglotzReport r = herglotz_scan(ct.samples);
      worst = std::min(worst, r.min_margin);
      o.require(r.min_margin >= -1e-8, std::string(label) + " F=" + fname);
    }
    o.detail << label << " min margin " << worst << "; ";
  }
  o.detail << pts.size() << " points";
  return o;
}

Outcome moment_asymptotics() {
  Outcome o;
  const double ts[] = {50.0, 100.0, 200.0};
  const ConvergedTransform ct = convergence_driver(
      lognormal(), to_grid({{0, ts[0]}, {0, ts[1]}, {0, ts[2]}}, 256), SchurParameter::zero());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> z(0.0, ts[k]);
    std::complex<double> series = 0.0;
    for (int n = 0; n <= 3; ++n) series -= std::exp(0.5 * n * n) / std::pow(z, n + 1);
    const double residual = std::abs(to_std(ct.samples[k].s(0, 0)) - series);
    const double scaled = residual * std::pow(ts[k], 5);
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    o.detail << "t=" << ts[k] << " residual " << residual << "; ";
  }
  o.require(lo > 0.0 && hi / lo <= 4.0, "residual * t^5 within a factor 4");
  o.detail << "t^5-scaled spread " << hi / lo << " at section " << ct.section_size;
  return o;
}

Outcome parameter_separation() {
  Outcome o;
  ConvergencePolicy policy;
  const std::vector<Complex> grid = to_grid({{0.0, 2.0}}, 256);
  std::vector<std::complex<double>> values;
  for (const SchurParameter& f :
       {SchurParameter::zero(), SchurParameter::scalar(1.0), SchurParameter::scalar(-1.0)}) {
    const ConvergedTransform ct = convergence_driver(lognormal(), grid, f, policy);
    values.push_back(to_std(ct.samples[0].s(0, 0)));
  }
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < values.size(); ++a)
    for (std::size_t b = a + 1; b < values.size(); ++b)
      closest = std::min(closest, std::abs(values[a] - values[b]));
  o.require(closest > 10.0 * policy.tol, "pairwise separation > 10x tolerance");
  o.detail << "closest pair " << closest << " vs tolerance " << policy.tol;
  return o;
}

double jump(const InversionResult& r, double left, double right) {
  auto at = [&](double x) {
    const auto it = std::lower_bound(r.lambda.begin(), r.lambda.end(), x - 1e-12);
    return r.cumulative[static_cast<std::size_t>(it - r.lambda.begin())](0, 0).real();
  };
  return at(right) - at(left);
}

Outcome inversion_round_trip() {
  Outcome o;
  InversionOptions atomic_opts;
  atomic_opts.epsilon = 1e-3;
  atomic_opts.step = 1e-4;
  const InversionResult ra = stieltjes_invert(atomic_transform(two_atom()), -2.0, 2.0, atomic_opts);
  const double left = jump(ra, -1.5, -0.5);
  const double right = jump(ra, 0.5, 1.5);
  o.require(std::abs(left - 0.5) <= 0.02 && std::abs(right - 0.5) <= 0.02, "two-atom jumps");

  InversionOptions ln_opts;
  ln_opts.epsilon = 1e-2;
  ln_opts.step = 0.02;
  ln_opts.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  PrecisionScope scope(256);
  const TransformEvaluator ev(lognormal(), 32);
  const InversionResult rl =
      stieltjes_invert(ev.sampler(SchurParameter::zero()), -10.0, 40.0, ln_opts);
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 1; i < rl.lambda.size(); ++i) {
    const double h = rl.lambda[i] - rl.lambda[i - 1];
    const double a = rl.density[i - 1](0, 0).real(), b = rl.density[i](0, 0).real();
    m0 += 0.5 * h * (a + b);
    m1 += 0.5 * h * (a * rl.lambda[i - 1] + b * rl.lambda[i]);
  }
  const double s1 = std::exp(0.5);
  o.require(std::abs(m0 - 1.0) <= 0.05 && std::abs(m1 - s1) <= 0.05 * s1,
            "lognormal S0 and S1 within 5%");
  o.detail << "two-atom jumps " << left << ", " << right << "; lognormal S0 " << m0 << " S1 "
           << m1 << " (exact " << s1 << ")";
  return o;
}

Outcome embedding_invariance() {
  Outcome o;
  const std::vector<Complex> grid = to_grid({{0.0, 2.0}, {1.0, 1.0}, {-2.0, 0.5}}, 256);
  ConvergencePolicy plain;
  ConvergencePolicy shuffled;
  shuffled.embed.basis_shuffle_seed = 314159;
  const ConvergedTransform a = convergence_driver(lognormal(), grid, SchurParameter::zero(), plain);
  const ConvergedTransform b =
      convergence_driver(lognormal(), grid, SchurParameter::zero(), shuffled);
  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
    worst = std::max(worst, to_double(frobenius_norm(CMatrix(a.samples[k].s - b.samples[k].s))));
  o.require(worst < 1e-8, "transform change < 1e-8");
  o.detail << "max change " << worst << " at sections " << a.section_size << "/" << b.section_size;
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"solvability gate", solvability_gate},
      {"finite-rank determinacy", finite_rank_determinacy},
      {"indeterminate lognormal", indeterminate_lognormal},
      {"unique-solution recovery", unique_solution_recovery},
      {"Schur-complement identity", schur_identity},
      {"Herglotz suite", herglotz_suite},
      {"moment asymptotics", moment_asymptotics},
      {"parameter separation", parameter_separation},
      {"inversion round-trip", inversion_round_trip},
      {"embedding invariance", embedding_invariance},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const hmp::Error& e) {
      o.pass = false;
      o.detail << "error " << hmp::to_string(e.code()) << ": " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
