#include "hmp/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "hmp/error.hpp"

namespace hmp {

namespace {

constexpr double kContractionSlack = 1e-12;
constexpr double kPi = 3.141592653589793238462643383279502884;

CMatrix rectangular_identity(int rows, int cols, const Complex& c) {
  CMatrix out = CMatrix::Zero(rows, cols);
  for (int i = 0; i < std::min(rows, cols); ++i) out(i, i) = c;
  return out;
}

// Runs body(i) for i in [0, count) on up to `threads` workers, each taking a
// contiguous range.
template <typename Body>
void fan_out(std::size_t count, int threads, Body body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(count, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SchurParameter SchurParameter::zero() { return SchurParameter{}; }

SchurParameter SchurParameter::scalar(std::complex<double> c) {
  if (std::abs(c) > 1.0 + kContractionSlack)
    fail(ErrorCode::kContractionViolated, "scalar Schur parameter with |c| > 1");
  SchurParameter p;
  p.kind_ = Kind::kScalar;
  p.c_ = c;
  return p;
}

SchurParameter SchurParameter::constant(CMatrix value) {
  SchurParameter p;
  p.kind_ = Kind::kConstant;
  p.constant_ = std::move(value);
  return p;
}

SchurParameter SchurParameter::moebius(std::complex<double> c, std::complex<double> a) {
  if (std::abs(c) > 1.0 + kContractionSlack)
    fail(ErrorCode::kContractionViolated, "Möbius Schur parameter with |c| > 1");
  if (!(a.imag() > 0.0))
    fail(ErrorCode::kInvalidArgument, "Möbius Schur parameter needs Im a > 0");
  SchurParameter p;
  p.kind_ = Kind::kMoebius;
  p.c_ = c;
  p.a_ = a;
  return p;
}

SchurParameter SchurParameter::evaluator(Evaluator fn) {
  if (!fn) fail(ErrorCode::kInvalidArgument, "empty Schur evaluator");
  SchurParameter p;
  p.kind_ = Kind::kEvaluator;
  p.fn_ = std::move(fn);
  return p;
}

CMatrix SchurParameter::value(const Complex& z, int rows, int cols) const {
  CMatrix f;
  switch (kind_) {
    case Kind::kZero:
      return CMatrix::Zero(rows, cols);
    case Kind::kScalar:
      f = rectangular_identity(rows, cols, make_complex(c_.real(), c_.imag()));
      break;
    case Kind::kMoebius: {
      const Complex a = make_complex(a_.real(), a_.imag());
      const Complex blaschke = (z - a) / (z - conj(a));
      f = rectangular_identity(rows, cols, make_complex(c_.real(), c_.imag()) * blaschke);
      break;
    }
    case Kind::kConstant:
      f = rounded(constant_);
      break;
    case Kind::kEvaluator:
      f = fn_(z, rows, cols);
      break;
  }
  if (f.rows() != rows || f.cols() != cols)
    fail(ErrorCode::kInvalidArgument,
         "Schur parameter is " + std::to_string(f.rows()) + "x" + std::to_string(f.cols()) +
             ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  if (spectral_norm(f) > 1.0 + kContractionSlack)
    fail(ErrorCode::kContractionViolated, "Schur parameter is not a contraction");
  return f;
}

TransformSample evaluate_transform(const NevanlinnaCoefficients& coeffs, const SchurParameter& f) {
  PrecisionScope scope(coeffs.precision_bits);
  const int delta = static_cast<int>(coeffs.c.rows());
  const int omega = static_cast<int>(coeffs.c.cols());
  const CMatrix fz = f.value(coeffs.z, omega, delta);

  CMatrix g = coeffs.a;
  if (f.kind() != SchurParameter::Kind::kZero) {
    CMatrix lft = CMatrix::Identity(delta, delta) + coeffs.c * fz;
    Eigen::PartialPivLU<CMatrix> lu(lft);
    const Real rc = lu.rcond();
    if (rc <= precision_tolerance(coeffs.precision_bits, 2.0))
      fail(ErrorCode::kLftSingular,
           "I + 𝐂F is numerically singular (reciprocal condition " + decimal_string(rc, 20) +
               ") at section " + std::to_string(coeffs.section_size));
    g += coeffs.b * fz * lu.solve(coeffs.d);
  }
  const Complex zz = coeffs.z * coeffs.z + Complex(1);
  g /= zz * zz;

  TransformSample out;
  out.z = coeffs.z;
  out.s = g.transpose();
  out.herglotz_margin = to_double(min_eigenvalue(imaginary_part(out.s)));
  return out;
}

HerglotzReport herglotz_scan(const std::vector<TransformSample>& samples, double eps) {
  HerglotzReport report;
  for (const TransformSample& s : samples) {
    report.margins.push_back(s.herglotz_margin);
    if (s.herglotz_margin < report.min_margin) {
      report.min_margin = s.herglotz_margin;
      report.worst_z = to_std(s.z);
    }
  }
  report.pass = report.min_margin >= -eps;
  return report;
}

HerglotzReport herglotz_scan(const std::vector<NevanlinnaCoefficients>& coeffs,
                             const SchurParameter& f, double eps) {
  std::vector<TransformSample> samples;
  samples.reserve(coeffs.size());
  for (const NevanlinnaCoefficients& c : coeffs) samples.push_back(evaluate_transform(c, f));
  return herglotz_scan(samples, eps);
}

InversionResult stieltjes_invert(const TransformSampler& sampler, double a, double b,
                                 const InversionOptions& options) {
  if (!(b > a)) fail(ErrorCode::kInvalidArgument, "inversion interval must have b > a");
  if (!(options.epsilon > 0.0)) fail(ErrorCode::kInvalidArgument, "ε must be positive");
  const double h_req = options.step.value_or(1e-4 * (b - a));
  if (!(h_req > 0.0)) fail(ErrorCode::kInvalidArgument, "grid step must be positive");
  const auto intervals = static_cast<std::size_t>(std::max(1.0, std::round((b - a) / h_req)));
  const double h = (b - a) / static_cast<double>(intervals);

  InversionResult out;
  out.lambda.resize(intervals + 1);
  out.density.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    out.lambda[i] = i == intervals ? b : a + h * static_cast<double>(i);

  const std::complex<double> half_over_i_pi(0.0, -0.5 / kPi);
  fan_out(intervals + 1, options.threads, [&](std::size_t i) {
    const Eigen::MatrixXcd s = sampler({out.lambda[i], options.epsilon});
    out.density[i] = (s - s.adjoint()) * half_over_i_pi;
  });

  const Eigen::Index n = out.density.front().rows();
  out.cumulative.assign(intervals + 1, Eigen::MatrixXcd::Zero(n, n));
  out.min_increment_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double step = out.lambda[i] - out.lambda[i - 1];
    const Eigen::MatrixXcd inc = (out.density[i] + out.density[i - 1]) * (0.5 * step);
    out.cumulative[i] = out.cumulative[i - 1] + inc;
    const Eigen::MatrixXcd herm = (inc + inc.adjoint()) * 0.5;
    const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly)
                          .eigenvalues()(0);
    out.min_increment_eigenvalue = std::min(out.min_increment_eigenvalue, lo);
  }
  if (intervals == 0) out.min_increment_eigenvalue = 0.0;
  out.monotone = out.min_increment_eigenvalue >= -kDefaultHerglotzEps;
  return out;
}

TransformSampler atomic_transform(const AtomicMatrixMeasure& measure) {
  std::vector<double> atoms;
  std::vector<Eigen::MatrixXcd> weights;
  for (std::size_t s = 0; s < measure.atoms.size(); ++s) {
    atoms.push_back(to_double(measure.atoms[s]));
    weights.push_back(to_double(measure.weights[s]));
  }
  const int n = measure.block_size;
  return [atoms = std::move(atoms), weights = std::move(weights), n](std::complex<double> z) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t k = 0; k < atoms.size(); ++k) s += weights[k] / (atoms[k] - z);
    return s;
  };
}

TransformEvaluator::TransformEvaluator(const MomentSequence& seq, int section_size,
                                       const EmbedOptions& embed_options,
                                       std::optional<double> deflate_tol)
    : seq_(seq) {
  const GramModel model = embed(seq, section_size, embed_options);
  const CayleyBasis basis = orthogonalize(model, deflate_tol);
  sm_ = structure_matrices(basis, model);
}

NevanlinnaCoefficients TransformEvaluator::coefficients_at(const Complex& z) const {
  return coefficients(sm_, seq_, z);
}

TransformSample TransformEvaluator::evaluate(const Complex& z, const SchurParameter& f) const {
  return evaluate_transform(coefficients(sm_, seq_, z), f);
}

std::vector<TransformSample> TransformEvaluator::evaluate(const std::vector<Complex>& grid,
                                                          const SchurParameter& f,
                                                          int threads) const {
  PrecisionScope scope(sm_.precision_bits);
  std::vector<TransformSample> out(grid.size());
  fan_out(grid.size(), threads, [&](std::size_t i) { out[i] = evaluate(grid[i], f); });
  return out;
}

TransformSampler TransformEvaluator::sampler(const SchurParameter& f) const {
  return [this, f](std::complex<double> z) {
    PrecisionScope scope(sm_.precision_bits);
    return to_double(evaluate(make_complex(z.real(), z.imag()), f).s);
  };
}

ConvergedTransform convergence_driver(const MomentSequence& seq, const std::vector<Complex>& grid,
                                      const SchurParameter& f, const ConvergencePolicy& policy) {
  PrecisionScope scope(seq.precision_bits());
  const std::vector<int> schedule =
      section_schedule(seq, policy.initial_section, policy.max_section);
  if (schedule.empty()) fail(ErrorCode::kInsufficientMoments, "no feasible section size");

  ConvergedTransform out;
  std::vector<TransformSample> previous;
  for (int m : schedule) {
    TransformEvaluator ev(seq, m, policy.embed, policy.deflate_tol);
    std::vector<TransformSample> samples = ev.evaluate(grid, f, policy.threads);
    out.sections.push_back(m);
    bool done = std::isinf(policy.tol) && policy.tol > 0;
    if (!previous.empty()) {
      Real gap(0);
      for (std::size_t i = 0; i < samples.size(); ++i)
        gap = max(gap, frobenius_norm(samples[i].s - previous[i].s));
      out.achieved_gap = to_double(gap);
      out.gap_history.push_back(out.achieved_gap);
      done = done || out.achieved_gap <= policy.tol;
    }
    out.samples = samples;
    out.section_size = m;
    out.structure = ev.structure();
    if (done) return out;
    previous = std::move(samples);
  }
  std::ostringstream msg;
  msg << "transform did not settle within tolerance " << policy.tol << " up to section "
      << out.section_size << "; gaps:";
  for (double g : out.gap_history) msg << ' ' << g;
  fail(ErrorCode::kNoConvergence, msg.str());
}

}  // namespace hmp
