#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hmp/cayley_basis.hpp"
#include "hmp/error.hpp"
#include "hmp/moments.hpp"
#include "hmp/oracle.hpp"
#include "hmp/transform.hpp"

namespace hmp::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::optional<unsigned> precision_bits;
  std::optional<int> max_section;
  std::optional<double> tol;
  std::string grid;
  std::string schur = "zero";
  double epsilon = 1e-3;
  std::string interval;
  std::optional<double> step;
  std::string family;
  std::optional<int> count;
};

constexpr int kInitialSection = 16;
constexpr int kDeterminacyMaxSection = 64;
constexpr int kTransformMaxSection = 128;

int worker_count() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::kFormat, "cannot read " + what + " from \"" + s + "\"");
}

std::vector<std::complex<double>> parse_grid(const std::string& spec) {
  if (spec.empty()) fail(ErrorCode::kFormat, "--grid is required for this command");
  std::vector<std::complex<double>> grid;
  if (spec.rfind("rect:", 0) == 0) {
    const std::vector<std::string> p = split(spec.substr(5), ':');
    if (p.size() != 5) fail(ErrorCode::kFormat, "rect grid needs x0:x1:y0:y1:step");
    const double x0 = parse_double(p[0], "x0");
    const double x1 = parse_double(p[1], "x1");
    const double y0 = parse_double(p[2], "y0");
    const double y1 = parse_double(p[3], "y1");
    const double h = parse_double(p[4], "step");
    if (!(h > 0) || x1 < x0 || y1 < y0) fail(ErrorCode::kFormat, "empty rect grid");
    const auto nx = static_cast<int>(std::floor((x1 - x0) / h + 1e-9));
    const auto ny = static_cast<int>(std::floor((y1 - y0) / h + 1e-9));
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) grid.emplace_back(x0 + i * h, y0 + j * h);
    return grid;
  }
  for (const std::string& item : split(spec, ',')) {
    const std::vector<std::string> p = split(item, ':');
    if (p.size() != 2) fail(ErrorCode::kFormat, "grid points are written re:im");
    grid.emplace_back(parse_double(p[0], "Re z"), parse_double(p[1], "Im z"));
  }
  return grid;
}

CMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kFormat, std::string("malformed Schur matrix: ") + e.what());
  }
  if (!doc.is_array() || doc.empty() || !doc[0].is_array())
    fail(ErrorCode::kFormat, "Schur matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(doc.size());
  const auto cols = static_cast<Eigen::Index>(doc[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!doc[i].is_array() || static_cast<Eigen::Index>(doc[i].size()) != cols)
      fail(ErrorCode::kFormat, "Schur matrix rows differ in length");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& e = doc[i][j];
      if (e.is_number()) {
        m(i, j) = make_complex(e.get<double>());
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, j) = make_complex(e[0].get<double>(), e[1].get<double>());
      } else {
        fail(ErrorCode::kFormat, "Schur matrix entries are numbers or [re, im]");
      }
    }
  }
  return m;
}

SchurParameter parse_schur(const std::string& spec) {
  if (spec == "zero") return SchurParameter::zero();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorCode::kFormat, "unknown Schur parameter " + spec);
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "scalar") {
    const std::vector<std::string> p = split(rest, ',');
    if (p.empty() || p.size() > 2) fail(ErrorCode::kFormat, "scalar:RE[,IM]");
    const double im = p.size() == 2 ? parse_double(p[1], "Im c") : 0.0;
    return SchurParameter::scalar({parse_double(p[0], "Re c"), im});
  }
  if (kind == "matrix") return SchurParameter::constant(read_matrix_file(rest));
  if (kind == "moebius") {
    const std::vector<std::string> p = split(rest, ',');
    if (p.size() != 4) fail(ErrorCode::kFormat, "moebius:C_RE,C_IM,A_RE,A_IM");
    return SchurParameter::moebius({parse_double(p[0], "Re c"), parse_double(p[1], "Im c")},
                                   {parse_double(p[2], "Re a"), parse_double(p[3], "Im a")});
  }
  fail(ErrorCode::kFormat, "unknown Schur parameter kind " + kind);
}

std::pair<double, double> parse_interval(const std::string& spec) {
  if (spec.empty()) fail(ErrorCode::kFormat, "--interval is required for density");
  std::vector<std::string> p = split(spec, ':');
  if (p.size() != 2) p = split(spec, ',');
  if (p.size() != 2) fail(ErrorCode::kFormat, "--interval is written a:b");
  const double a = parse_double(p[0], "a");
  const double b = parse_double(p[1], "b");
  if (!(b > a)) fail(ErrorCode::kFormat, "--interval needs a < b");
  return {a, b};
}

MomentSequence load(const RunConfig& cfg) {
  if (cfg.input.empty()) fail(ErrorCode::kIo, "--input is required");
  return read_moment_file(cfg.input, cfg.precision_bits);
}

std::vector<Complex> to_grid(const MomentSequence& seq,
                             const std::vector<std::complex<double>>& points) {
  PrecisionScope scope(seq.precision_bits());
  std::vector<Complex> grid;
  grid.reserve(points.size());
  for (const auto& p : points) grid.push_back(make_complex(p.real(), p.imag()));
  return grid;
}

void append_matrix(std::ostream& row, const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row << ',' << num(to_double(real(m(i, j)))) << ',' << num(to_double(imag(m(i, j))));
}

void append_matrix(std::ostream& row, const Eigen::MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row << ',' << num(m(i, j).real()) << ',' << num(m(i, j).imag());
}

void append_header(std::ostream& row, const std::string& name, Eigen::Index rows,
                   Eigen::Index cols) {
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      row << ',' << name << '_' << i << '_' << j << "_re," << name << '_' << i << '_' << j
          << "_im";
}

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) fail(ErrorCode::kIo, "cannot write " + cfg.output);
  file << text;
  if (!file) fail(ErrorCode::kIo, "write failed for " + cfg.output);
}

json report_header(const std::string& command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const MomentSequence seq = load(cfg);
  const SolvabilityReport rep = validate_solvability(seq);
  json j = report_header("validate");
  j["block_size"] = seq.block_size();
  j["moment_count"] = seq.size();
  j["precision_bits"] = seq.precision_bits();
  j["checked_depth"] = rep.checked_depth;
  j["epsilon_psd"] = rep.epsilon_psd;
  j["min_eigenvalue_per_order"] = rep.min_eigenvalue_per_order;
  j["max_eigenvalue_per_order"] = rep.max_eigenvalue_per_order;
  const bool ok = rep.verdict == SolvabilityVerdict::kSolvable;
  j["verdict"] = ok ? "solvable" : "rejected";
  if (ok)
    j["rejected_order"] = nullptr;
  else
    j["rejected_order"] = rep.rejected_order;
  emit(cfg, j.dump(2) + "\n", out);
  return ok ? kOk : kRejected;
}

json evidence_json(const SectionEvidence& e) {
  json j;
  j["section_size"] = e.section_size;
  j["rank"] = e.rank;
  j["tau"] = e.tau;
  j["delta"] = e.delta;
  j["omega"] = e.omega;
  j["rho"] = e.rho;
  j["residual_a"] = e.residual_a;
  j["residual_b"] = e.residual_b;
  j["discarded_eigenvalue"] = e.discarded_eigenvalue;
  j["precision_limited"] = e.precision_limited;
  return j;
}

int cmd_determinacy(const RunConfig& cfg, std::ostream& out) {
  const MomentSequence seq = load(cfg);
  DeterminacyPolicy policy;
  policy.initial_section = kInitialSection;
  policy.max_section = cfg.max_section.value_or(kDeterminacyMaxSection);
  policy.theta = cfg.tol;
  const DeterminacyVerdict v = classify_determinacy(seq, policy);

  json j = report_header("determinacy");
  j["verdict"] = std::string(to_string(v.verdict));
  j["zero_sequence"] = v.zero_sequence;
  j["reason"] = v.reason;
  j["threshold"] = v.threshold;
  j["precision_bits"] = seq.precision_bits();
  j["side_a_residuals"] = v.side_a_residuals;
  j["side_b_residuals"] = v.side_b_residuals;
  json hist = json::array();
  for (const SectionEvidence& e : v.history) hist.push_back(evidence_json(e));
  j["history"] = std::move(hist);
  j["carleman_hint"] = oracle::carleman_hint(seq) == oracle::CarlemanHint::kSuggestsDeterminate
                           ? "suggests-determinate"
                           : "no-information";
  emit(cfg, j.dump(2) + "\n", out);
  switch (v.verdict) {
    case Verdict::kDeterminate: return kOk;
    case Verdict::kIndeterminate: return kIndeterminate;
    case Verdict::kInconclusive: return kInconclusive;
  }
  return kInconclusive;
}

ConvergencePolicy transform_policy(const RunConfig& cfg) {
  ConvergencePolicy policy;
  policy.initial_section = kInitialSection;
  policy.max_section = cfg.max_section.value_or(kTransformMaxSection);
  policy.tol = cfg.tol.value_or(policy.tol);
  policy.threads = worker_count();
  return policy;
}

struct UniqueSolution {
  AtomicMatrixMeasure measure;
  int section_size = 0;
};

// The first scheduled section without defect carries the unique solution.
UniqueSolution unique_solution(const MomentSequence& seq, int max_section) {
  UniqueSolution out;
  out.measure.block_size = seq.block_size();
  if (seq.is_zero()) return out;
  for (int m : section_schedule(seq, kInitialSection, max_section)) {
    const GramModel model = embed(seq, m);
    out.section_size = m;
    if (model.empty()) return out;
    const CayleyBasis basis = orthogonalize(model);
    if (basis.delta() == 0 && basis.omega() == 0) {
      out.measure = unique_solution_atoms(model, basis);
      return out;
    }
  }
  fail(ErrorCode::kNoConvergence, "no section without defect up to the maximum section");
}

// Converged parametrized transform, or nullopt when the input is determinate.
std::optional<ConvergedTransform> try_converge(const MomentSequence& seq,
                                               const std::vector<Complex>& grid,
                                               const SchurParameter& f,
                                               const ConvergencePolicy& policy) {
  if (seq.is_zero()) return std::nullopt;
  try {
    return convergence_driver(seq, grid, f, policy);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDeterminateInput) return std::nullopt;
    throw;
  }
}

json atoms_json(const AtomicMatrixMeasure& m) {
  json at = json::array();
  for (const Real& x : m.atoms) at.push_back(to_double(x));
  return at;
}

int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  const MomentSequence seq = load(cfg);
  const SchurParameter f = parse_schur(cfg.schur);
  const std::vector<std::complex<double>> points = parse_grid(cfg.grid);
  const std::vector<Complex> grid = to_grid(seq, points);
  const ConvergencePolicy policy = transform_policy(cfg);
  const std::optional<ConvergedTransform> ct = try_converge(seq, grid, f, policy);

  const int n = seq.block_size();
  std::ostringstream csv;
  csv << "z_re,z_im";
  append_header(csv, "S", n, n);
  csv << '\n';
  json j = report_header("transform");
  if (ct) {
    for (const TransformSample& s : ct->samples) {
      csv << num(to_double(real(s.z))) << ',' << num(to_double(imag(s.z)));
      append_matrix(csv, s.s);
      csv << '\n';
    }
    const HerglotzReport hr = herglotz_scan(ct->samples);
    j["path"] = "parametrized";
    j["section_size"] = ct->section_size;
    j["sections"] = ct->sections;
    j["gap_history"] = ct->gap_history;
    j["min_herglotz_margin"] = hr.min_margin;
    j["herglotz_pass"] = hr.pass;
  } else {
    const UniqueSolution u = unique_solution(seq, policy.max_section);
    const TransformSampler sampler = atomic_transform(u.measure);
    for (const auto& z : points) {
      if (!(z.imag() > 0)) fail(ErrorCode::kLowerHalfPlane, "grid point outside the upper half-plane");
      csv << num(z.real()) << ',' << num(z.imag());
      append_matrix(csv, sampler(z));
      csv << '\n';
    }
    j["path"] = "unique-solution";
    j["section_size"] = u.section_size;
    j["atoms"] = atoms_json(u.measure);
  }
  emit(cfg, csv.str(), out);
  if (!cfg.output.empty()) out << j.dump(2) << '\n';
  return kOk;
}

int cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
  const MomentSequence seq = load(cfg);
  const std::vector<Complex> grid = to_grid(seq, parse_grid(cfg.grid));
  const ConvergedTransform ct =
      convergence_driver(seq, grid, SchurParameter::zero(), transform_policy(cfg));

  PrecisionScope scope(seq.precision_bits());
  std::vector<NevanlinnaCoefficients> cs;
  for (const Complex& z : grid) cs.push_back(coefficients(ct.structure, seq, z));

  std::ostringstream csv;
  if (!cs.empty()) {
    const NevanlinnaCoefficients& c0 = cs.front();
    csv << "# A " << shape(c0.a) << ", B " << shape(c0.b) << ", C " << shape(c0.c) << ", D "
        << shape(c0.d) << ", section " << ct.section_size << ", tau " << c0.tau << '\n';
    std::ostringstream h;
    h << "z_re,z_im";
    append_header(h, "A", c0.a.rows(), c0.a.cols());
    append_header(h, "B", c0.b.rows(), c0.b.cols());
    append_header(h, "C", c0.c.rows(), c0.c.cols());
    append_header(h, "D", c0.d.rows(), c0.d.cols());
    csv << h.str() << '\n';
  }
  for (const NevanlinnaCoefficients& c : cs) {
    std::ostringstream row;
    row << num(to_double(real(c.z))) << ',' << num(to_double(imag(c.z)));
    append_matrix(row, c.a);
    append_matrix(row, c.b);
    append_matrix(row, c.c);
    append_matrix(row, c.d);
    csv << row.str() << '\n';
  }
  emit(cfg, csv.str(), out);
  return kOk;
}

std::string matrix_series_csv(const std::vector<double>& lambda,
                              const std::vector<Eigen::MatrixXcd>& values, const char* name) {
  std::ostringstream csv;
  csv << "lambda";
  if (!values.empty()) {
    std::ostringstream h;
    append_header(h, name, values.front().rows(), values.front().cols());
    csv << h.str();
  }
  csv << '\n';
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    std::ostringstream row;
    row << num(lambda[i]);
    append_matrix(row, values[i]);
    csv << row.str() << '\n';
  }
  return csv.str();
}

int cmd_density(const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty()) fail(ErrorCode::kIo, "density needs --output");
  const MomentSequence seq = load(cfg);
  const auto [a, b] = parse_interval(cfg.interval);
  InversionOptions opts;
  opts.epsilon = cfg.epsilon;
  opts.step = cfg.step;
  opts.threads = worker_count();

  PrecisionScope scope(seq.precision_bits());
  const SchurParameter f = parse_schur(cfg.schur);
  const std::vector<std::complex<double>> probe =
      cfg.grid.empty() ? std::vector<std::complex<double>>{{0, 2}, {1, 1}, {-1, 2}}
                       : parse_grid(cfg.grid);
  const ConvergencePolicy policy = transform_policy(cfg);
  const std::optional<ConvergedTransform> ct = try_converge(seq, to_grid(seq, probe), f, policy);

  json j = report_header("density");
  TransformSampler sampler;
  std::optional<TransformEvaluator> evaluator;
  if (ct) {
    evaluator.emplace(seq, ct->section_size);
    sampler = evaluator->sampler(f);
    j["path"] = "parametrized";
    j["section_size"] = ct->section_size;
  } else {
    const UniqueSolution u = unique_solution(seq, policy.max_section);
    sampler = atomic_transform(u.measure);
    j["path"] = "unique-solution";
    j["section_size"] = u.section_size;
    j["atoms"] = atoms_json(u.measure);
  }
  const InversionResult inv = stieltjes_invert(sampler, a, b, opts);

  emit(cfg, matrix_series_csv(inv.lambda, inv.density, "rho"), out);
  std::filesystem::path cum(cfg.output);
  cum.replace_filename(cum.stem().string() + ".cumulative.csv");
  RunConfig cum_cfg = cfg;
  cum_cfg.output = cum.string();
  emit(cum_cfg, matrix_series_csv(inv.lambda, inv.cumulative, "M"), out);

  j["epsilon"] = opts.epsilon;
  j["points"] = inv.lambda.size();
  j["monotone"] = inv.monotone;
  j["min_increment_eigenvalue"] = inv.min_increment_eigenvalue;
  j["cumulative_output"] = cum.string();
  out << j.dump(2) << '\n';
  return kOk;
}

MomentSequence scalar_sequence(const std::vector<double>& values, unsigned bits) {
  PrecisionScope scope(bits);
  std::vector<CMatrix> moments;
  for (double v : values) {
    CMatrix s(1, 1);
    s(0, 0) = make_complex(v);
    moments.push_back(std::move(s));
  }
  return MomentSequence::create(1, std::move(moments), bits);
}

AtomicMatrixMeasure scalar_atoms(std::vector<double> atoms, std::vector<double> weights) {
  AtomicMatrixMeasure m;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    m.atoms.emplace_back(atoms[k]);
    CMatrix w(1, 1);
    w(0, 0) = make_complex(weights[k]);
    m.weights.push_back(std::move(w));
  }
  return m;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const std::string& fam = cfg.family;
  const bool wide = fam == "lognormal" || fam == "block-diagonal";
  const unsigned bits = cfg.precision_bits.value_or(wide ? 256u : kDefaultPrecisionBits);
  const int fallback = wide ? 129 : fam == "gaussian" ? 32 : fam == "indefinite" ? 3 : 16;
  const int count = cfg.count.value_or(fallback);
  if (count < 2) fail(ErrorCode::kFormat, "count must be at least 2");

  std::optional<MomentSequence> seq;
  if (fam == "two-atom") {
    seq = oracle::atomic_moments(scalar_atoms({-1.0, 1.0}, {0.5, 0.5}), count, bits);
  } else if (fam == "point-mass") {
    seq = oracle::atomic_moments(scalar_atoms({0.0}, {1.0}), count, bits);
  } else if (fam == "lognormal") {
    seq = oracle::lognormal_moments(count, bits);
  } else if (fam == "gaussian") {
    seq = oracle::gaussian_moments(count, bits);
  } else if (fam == "zero") {
    seq = scalar_sequence(std::vector<double>(static_cast<std::size_t>(count), 0.0), bits);
  } else if (fam == "indefinite") {
    std::vector<double> v(static_cast<std::size_t>(count), 0.0);
    v[0] = 1.0;
    if (count > 2) v[2] = -1.0;
    seq = scalar_sequence(v, bits);
  } else if (fam == "block-diagonal") {
    seq = oracle::block_diagonal(
        oracle::lognormal_moments(count, bits),
        oracle::atomic_moments(scalar_atoms({-1.0, 1.0}, {0.5, 0.5}), count, bits));
  } else {
    fail(ErrorCode::kFormat,
         "unknown family " + fam +
             " (two-atom, point-mass, lognormal, gaussian, zero, indefinite, block-diagonal)");
  }
  emit(cfg, to_moment_json(*seq), out);
  return kOk;
}

void report_error(std::ostream& err, std::string_view cause, const std::string& message) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["error"] = std::string(cause);
  j["message"] = message;
  err << j.dump() << '\n';
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix Hamburger moment problem toolkit", "hmp"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "moment file (JSON)");
    sub->add_option("--output", cfg.output, "output file; standard output when omitted");
    sub->add_option("--precision-bits", cfg.precision_bits, "working precision (>= 53)");
  };
  auto add_section = [&](CLI::App* sub) {
    sub->add_option("--max-section", cfg.max_section, "largest section size (power of two)");
    sub->add_option("--tol", cfg.tol, "convergence tolerance or determinacy threshold");
  };

  CLI::App* validate = app.add_subcommand("validate", "check positive semidefiniteness of Γ_n");
  add_common(validate);
  CLI::App* determinacy = app.add_subcommand("determinacy", "classify determinacy");
  add_common(determinacy);
  add_section(determinacy);
  CLI::App* coeffs = app.add_subcommand("coeffs", "Nevanlinna coefficient matrices on a grid");
  add_common(coeffs);
  add_section(coeffs);
  coeffs->add_option("--grid", cfg.grid, "re:im,... or rect:x0:x1:y0:y1:step");
  CLI::App* transform = app.add_subcommand("transform", "Stieltjes transforms of a solution");
  add_common(transform);
  add_section(transform);
  transform->add_option("--grid", cfg.grid, "re:im,... or rect:x0:x1:y0:y1:step");
  transform->add_option("--schur", cfg.schur, "zero | scalar:RE[,IM] | matrix:PATH | moebius:C_RE,C_IM,A_RE,A_IM");
  CLI::App* density = app.add_subcommand("density", "Stieltjes–Perron inversion");
  add_common(density);
  add_section(density);
  density->add_option("--grid", cfg.grid, "probe points for the convergence check");
  density->add_option("--schur", cfg.schur, "Schur parameter");
  density->add_option("--epsilon", cfg.epsilon, "imaginary offset");
  density->add_option("--interval", cfg.interval, "a:b");
  density->add_option("--step", cfg.step, "grid step");
  CLI::App* generate = app.add_subcommand("generate", "emit an oracle moment file");
  generate->add_option("family", cfg.family, "two-atom | point-mass | lognormal | gaussian | zero | indefinite | block-diagonal")
      ->required();
  generate->add_option("count", cfg.count, "number of moments");
  generate->add_option("--output", cfg.output, "output file; standard output when omitted");
  generate->add_option("--precision-bits", cfg.precision_bits, "working precision (>= 53)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kInputError;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    if (cfg.precision_bits && *cfg.precision_bits < 53)
      fail(ErrorCode::kFormat, "--precision-bits must be at least 53");
    if (cfg.max_section && !is_power_of_two(*cfg.max_section))
      fail(ErrorCode::kFormat, "--max-section must be a power of two");
    if (cfg.tol && !(*cfg.tol > 0)) fail(ErrorCode::kFormat, "--tol must be positive");
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    if (cfg.command == "determinacy") return cmd_determinacy(cfg, out);
    if (cfg.command == "coeffs") return cmd_coeffs(cfg, out);
    if (cfg.command == "transform") return cmd_transform(cfg, out);
    if (cfg.command == "density") return cmd_density(cfg, out);
    return cmd_generate(cfg, out);
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return e.code() == ErrorCode::kIo || e.code() == ErrorCode::kFormat ? kInputError
                                                                        : kUnderlyingError;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return kUnderlyingError;
  }
}

}  // namespace hmp::cli
