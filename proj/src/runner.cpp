#include "lsg/runner.hpp"

#include "lsg/acceptance.hpp"
#include "lsg/error.hpp"
#include "lsg/estimates.hpp"
#include "lsg/hardy.hpp"
#include "lsg/heisenberg.hpp"
#include "lsg/propagator.hpp"
#include "lsg/spherical.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace lsg {
namespace {

using json = nlohmann::ordered_json;

const std::set<std::string, std::less<>> kParamKeys{
    "lambda", "t0", "p", "T", "refinements", "q", "beta", "tparam", "smax", "steps",
    "x",      "u",  "xi", "lmax", "quad_tol", "kmax", "normalization"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    fail(ErrorCode::ConfigError, "config: " + std::string(key) + " expects a number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  for (const auto& item : split(value, ',')) out.push_back(parse_double(key, item));
  return out;
}

GridSpec parse_grid(std::string_view key, std::string_view value) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) fail(ErrorCode::ConfigError, "config: " + std::string(key) + " expects N,L");
  const double n = parse_double(key, parts[0]);
  const double l = parse_double(key, parts[1]);
  if (n != std::floor(n) || n < 16 || static_cast<long long>(n) % 2 != 0) {
    fail(ErrorCode::ConfigError, "config: " + std::string(key) + " needs N even and >= 16, got " + parts[0]);
  }
  if (!(l > 0.0)) fail(ErrorCode::ConfigError, "config: " + std::string(key) + " needs L > 0, got " + parts[1]);
  return {static_cast<int>(n), l};
}

std::string grid_text(const GridSpec& g) { return std::to_string(g.n) + "," + format_number(g.half_width); }

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

// ---- command helpers -----------------------------------------------------

struct Context {
  const RunConfig& config;
  ResultRecord& record;

  double param(const std::string& key, double fallback) const {
    const auto it = config.params.find(key);
    return it == config.params.end() ? fallback : parse_double(key, it->second);
  }
  std::vector<double> param_list(const std::string& key) const {
    const auto it = config.params.find(key);
    if (it == config.params.end()) fail(ErrorCode::ConfigError, "config: missing parameter " + key);
    return parse_list(key, it->second);
  }
  double tol(const std::string& key, double fallback) const {
    const auto it = config.tolerances.find(key);
    return it == config.tolerances.end() ? fallback : it->second;
  }
  void result(const std::string& name, double value) { record.results.emplace_back(name, value); }
  void checked(const std::string& name, double value, double tolerance) {
    result(name, value);
    record.tolerances[name] = tolerance;
  }
  void note(const std::string& key, const std::string& value) { record.notes.emplace_back(key, value); }
};

bool is_euclidean(const std::string& group) { return group.rfind("euclid:", 0) == 0; }

int euclidean_dimension(const std::string& group) {
  const double n = parse_double("group", group.substr(7));
  if (n != std::floor(n) || n < 1 || n > 3) fail(ErrorCode::DimensionError, "group: euclid:<n> needs n in 1..3");
  return static_cast<int>(n);
}

RootSystemSpec group_of(const RunConfig& c) {
  const auto it = c.params.find("normalization");
  const double norm = it == c.params.end() ? 1.0 : parse_double("normalization", it->second);
  return build_root_system(c.group, norm);
}

RadialGrid grid_for(const RunConfig& c, int rank) { return RadialGrid(rank, c.grid.half_width, c.grid.n); }

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values) { rows_.push_back(values); }
  std::string text() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_number(r[i]);
      out << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::ConfigError, "output: cannot open " + path);
  out << text;
}

void emit_csv(Context& ctx, const Csv& csv) {
  if (ctx.config.output.empty() || ctx.config.format != "csv") return;
  write_file(ctx.config.output, csv.text());
  ctx.record.artifacts.push_back(ctx.config.output);
}

std::vector<std::string> coord_names(int rank) {
  std::vector<std::string> names;
  for (int a = 0; a < rank; ++a) names.push_back("h" + std::to_string(a + 1));
  return names;
}

std::string vector_text(const Eigen::VectorXd& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v(i));
  return s + ")";
}

// ---- commands ------------------------------------------------------------

void cmd_rootsys(Context& ctx) {
  const auto rs = group_of(ctx.config);
  ctx.result("rank", rs.rank);
  ctx.result("weyl_order", static_cast<double>(rs.weyl_group.size()));
  ctx.result("roots", static_cast<double>(rs.roots.size()));
  ctx.result("positive_roots", static_cast<double>(rs.positive_roots.size()));
  ctx.result("rho_norm_sq", rs.rho.squaredNorm());
  std::string roots;
  for (const auto& r : rs.positive_roots) roots += vector_text(r);
  ctx.note("positive_roots", roots);
  std::string simple;
  for (const auto& r : rs.simple_roots) simple += vector_text(r);
  ctx.note("simple_roots", simple);
  ctx.note("rho", vector_text(rs.rho));
}

void field_rows(Csv& csv, const RadialGrid& grid, const std::vector<cplx>& values, std::vector<double> prefix = {}) {
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    std::vector<double> row = prefix;
    const auto h = grid.node(i);
    for (Eigen::Index a = 0; a < h.size(); ++a) row.push_back(h(a));
    row.push_back(values[i].real());
    row.push_back(values[i].imag());
    csv.row(row);
  }
}

void cmd_spherical(Context& ctx) {
  const auto rs = group_of(ctx.config);
  const RadialGrid grid = grid_for(ctx.config, rs.rank);
  const std::string action = ctx.config.action.empty() ? "roundtrip" : ctx.config.action;
  auto header = coord_names(rs.rank);
  header.insert(header.end(), {"re", "im"});
  const RadialGrid spectral = ctx.config.spectral_grid
                                  ? RadialGrid(rs.rank, ctx.config.spectral_grid->half_width, ctx.config.spectral_grid->n)
                                  : grid.dual();
  if (action == "eval") {
    const auto lv = ctx.param_list("lambda");
    if (static_cast<int>(lv.size()) != rs.rank) fail(ErrorCode::DimensionError, "spherical eval: lambda needs rank components");
    const SpectralVector lambda{Eigen::Map<const Eigen::VectorXd>(lv.data(), rs.rank)};
    Csv csv(header);
    std::vector<double> h(static_cast<std::size_t>(rs.rank));
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
      grid.node(i, h);
      const auto node = grid.node(i);
      if (is_wall(rs, h) && !node.isZero(0.0)) {
        ++skipped;
        continue;
      }
      const cplx v = spherical_function(rs, lambda, CartanVector{node});
      std::vector<double> row(h.begin(), h.end());
      row.push_back(v.real());
      row.push_back(v.imag());
      csv.row(row);
    }
    ctx.result("value_at_origin", spherical_function(rs, lambda, CartanVector{Eigen::VectorXd::Zero(rs.rank)}).real());
    ctx.result("wall_nodes_skipped", static_cast<double>(skipped));
    emit_csv(ctx, csv);
  } else if (action == "transform") {
    const auto f = sample_gaussian(grid, parse_gaussian_init(ctx.config.init));
    const auto F = spherical_transform(rs, f, spectral);
    ctx.result("spectral_nodes", static_cast<double>(F.values.size()));
    ctx.result("max_abs", max_abs(F.values));
    Csv csv(header);
    field_rows(csv, F.grid, F.values);
    emit_csv(ctx, csv);
  } else if (action == "roundtrip") {
    const auto f = sample_gaussian(grid, parse_gaussian_init(ctx.config.init));
    const auto back = inverse_spherical_transform(rs, spherical_transform(rs, f, spectral), grid);
    const double err = relative_l2_density(rs, back, f);
    const double tol = ctx.tol("roundtrip", rs.rank == 1 ? 1e-6 : 1e-4);
    ctx.checked("roundtrip_error", err, tol);
    if (!(err <= tol)) ctx.record.exit_status = exit_status(ErrorCode::InvariantViolation);
    Csv csv(header);
    field_rows(csv, grid, back.values);
    emit_csv(ctx, csv);
  } else {
    fail(ErrorCode::ConfigError, "spherical: unknown action '" + action + "' (eval, transform, roundtrip)");
  }
}

void cmd_evolve(Context& ctx) {
  const auto& c = ctx.config;
  const GaussianInit init = parse_gaussian_init(c.init);
  const GridMode mode = c.mode == "fixed" ? GridMode::Fixed : GridMode::Scaled;
  if (c.mode != "fixed" && c.mode != "scaled") fail(ErrorCode::ConfigError, "mode: expected scaled or fixed");
  if (c.method != "closed" && c.method != "spectral") fail(ErrorCode::ConfigError, "method: expected closed or spectral");
  Csv* csv = nullptr;
  std::optional<Csv> table;
  if (is_euclidean(c.group)) {
    const int dim = euclidean_dimension(c.group);
    const RadialGrid grid = grid_for(c, dim);
    const auto f = sample_gaussian(grid, init);
    auto header = coord_names(dim);
    header.insert(header.begin(), "t");
    header.insert(header.end(), {"re_u", "im_u", "abs_u"});
    table.emplace(header);
    csv = &*table;
    const double m0 = l2_norm(grid, f.values);
    double worst_error = 0.0;
    for (double t : c.times) {
      const auto r = euclidean_propagate(grid, f.values, t, mode);
      ctx.result("mass_t" + format_number(t), l2_norm(r.field.grid, r.field.values) / m0);
      for (std::size_t i = 0; i < r.field.grid.node_count(); ++i) {
        const auto h = r.field.grid.node(i);
        const cplx exact = euclidean_gaussian_solution(init, dim, h.squaredNorm(), t);
        worst_error = std::max(worst_error, std::abs(r.field.values[i] - exact));
        std::vector<double> row{t};
        for (Eigen::Index a = 0; a < h.size(); ++a) row.push_back(h(a));
        row.insert(row.end(), {r.field.values[i].real(), r.field.values[i].imag(), std::abs(r.field.values[i])});
        csv->row(row);
      }
    }
    ctx.result("max_error_vs_exact", worst_error);
  } else {
    const auto rs = group_of(c);
    const RadialGrid grid = grid_for(c, rs.rank);
    const auto f = sample_gaussian(grid, init);
    auto header = coord_names(rs.rank);
    header.insert(header.begin(), "t");
    header.insert(header.end(), {"re_uphi", "im_uphi", "abs_u"});
    table.emplace(header);
    csv = &*table;
    const double m0 = mass(to_conjugated(rs, f));
    std::optional<RadialGrid> spectral;
    if (c.spectral_grid) spectral = RadialGrid(rs.rank, c.spectral_grid->half_width, c.spectral_grid->n);
    for (double t : c.times) {
      PropagationResult r;
      if (c.method == "closed") {
        r = group_propagate_closed_form(rs, f, t, mode);
      } else {
        const std::optional<RadialGrid> out =
            mode == GridMode::Scaled && t > 0.0 ? std::optional<RadialGrid>(scaled_grid(grid, t)) : std::nullopt;
        r = group_propagate_spectral(rs, f, t, spectral, out);
      }
      const double drift = std::abs(mass(r.field) / m0 - 1.0);
      ctx.result("mass_t" + format_number(t), mass(r.field));
      ctx.checked("mass_drift_t" + format_number(t), drift, c.method == "closed" ? 1e-8 : 1e-10);
      const auto plain = plain_profile(rs, r);
      for (std::size_t i = 0; i < r.field.grid.node_count(); ++i) {
        const auto h = r.field.grid.node(i);
        std::vector<double> row{t};
        for (Eigen::Index a = 0; a < h.size(); ++a) row.push_back(h(a));
        row.insert(row.end(), {r.field.values[i].real(), r.field.values[i].imag(), std::abs(plain.values[i])});
        csv->row(row);
      }
    }
    ctx.note("method", c.method);
  }
  ctx.note("mode", c.mode);
  emit_csv(ctx, *csv);
}

void report_uniqueness(Context& ctx, const UniquenessReport& r, double tol_crit) {
  ctx.checked("product", r.verdict.product, tol_crit);
  ctx.result("t0", r.verdict.t0);
  ctx.result("rate_f", r.fit_f.envelope.rate);
  ctx.result("rate_u", r.fit_u.envelope.rate);
  ctx.result("residual_f", r.fit_f.residual);
  ctx.result("residual_u", r.fit_u.residual);
  ctx.result("sup_norm", r.sup_norm);
  ctx.note("classification", r.degenerate ? "DEGENERATE" : std::string(to_string(r.verdict.classification)));
  ctx.note("statement", r.statement);
}

void cmd_hardy(Context& ctx) {
  const auto& c = ctx.config;
  const double t0 = ctx.param("t0", c.times.front());
  const double tol_crit = ctx.tol("crit", kDefaultTolCrit);
  const GaussianInit init = parse_gaussian_init(c.init);
  if (is_euclidean(c.group)) {
    const RadialGrid grid = grid_for(c, euclidean_dimension(c.group));
    report_uniqueness(ctx, uniqueness_experiment_euclidean(grid, sample_gaussian(grid, init).values, t0, tol_crit),
                      tol_crit);
  } else {
    const auto rs = group_of(c);
    report_uniqueness(ctx, uniqueness_experiment(rs, sample_gaussian(grid_for(c, rs.rank), init), t0, tol_crit),
                      tol_crit);
  }
}

void cmd_decay(Context& ctx) {
  const auto& c = ctx.config;
  const auto rs = group_of(c);
  std::vector<double> times = c.times;
  if (!c.times_given) {
    times.clear();
    for (int k = 0; k <= 8; ++k) times.push_back(std::pow(10.0, k / 8.0));
  }
  const double p = ctx.param("p", 1.0);
  const auto fit = decay_exponent_fit(rs, sample_gaussian(grid_for(c, rs.rank), parse_gaussian_init(c.init)), p, times);
  const double tol = ctx.tol("slope", p == 2.0 ? 0.02 : 0.05);
  ctx.checked("slope", fit.slope, tol);
  ctx.result("target", fit.target);
  ctx.result("p", p);
  const bool pass = std::abs(fit.slope - fit.target) <= tol;
  ctx.note("status", pass ? "pass" : "fail");
  if (!pass) ctx.record.exit_status = exit_status(ErrorCode::InvariantViolation);
  Csv csv({"t", "norm"});
  for (std::size_t i = 0; i < fit.times.size(); ++i) csv.row({fit.times[i], fit.norms[i]});
  emit_csv(ctx, csv);
}

void cmd_strichartz(Context& ctx) {
  const auto& c = ctx.config;
  const auto rs = group_of(c);
  const double T = ctx.param("T", 2.0);
  const int refinements = static_cast<int>(ctx.param("refinements", 4.0));
  const auto pair = strichartz_pair(rs.rank);
  ctx.result("p", pair.p);
  ctx.result("q", pair.q);
  const auto levels =
      strichartz_norm(rs, sample_gaussian(grid_for(c, rs.rank), parse_gaussian_init(c.init)), T, refinements, ctx.param("q", 0.0));
  const double change = strichartz_stabilization(levels);
  const double tol = ctx.tol("stabilization", 0.02);
  ctx.result("norm", levels.back().value);
  ctx.checked("stabilization", change, tol);
  const bool pass = change <= tol;
  ctx.note("status", pass ? "pass" : "fail");
  if (!pass) ctx.record.exit_status = exit_status(ErrorCode::InvariantViolation);
  Csv csv({"level", "dyadic_levels", "nodes_per_interval", "value"});
  for (std::size_t i = 0; i < levels.size(); ++i) {
    csv.row({static_cast<double>(i), static_cast<double>(levels[i].dyadic_levels),
             static_cast<double>(levels[i].nodes_per_interval), levels[i].value});
  }
  emit_csv(ctx, csv);
}

void cmd_heisenberg(Context& ctx) {
  namespace hz = heisenberg;
  const std::string action = ctx.config.action.empty() ? "geodesic" : ctx.config.action;
  const int steps = static_cast<int>(ctx.param("steps", 200.0));
  if (steps < 2) fail(ErrorCode::ConfigError, "heisenberg: steps must be at least 2");
  if (action == "geodesic") {
    const double beta = ctx.param("beta", 0.0);
    const double tparam = ctx.param("tparam", 1.0);
    const double smax = ctx.param("smax", 10.0);
    Csv csv({"s", "x", "u", "xi"});
    std::vector<double> s_values;
    for (int k = 0; k < steps; ++k) {
      const double s = smax * k / (steps - 1);
      s_values.push_back(s);
      const auto p = hz::geodesic({beta, tparam, s});
      csv.row({s, p.x, p.u, p.xi});
    }
    ctx.checked("projection_residual", hz::projection_residual(beta, tparam, s_values), 1e-12);
    if (tparam > 0.0) ctx.result("first_cut_point", hz::cutlocus_distance(1, tparam));
    emit_csv(ctx, csv);
  } else if (action == "integrand") {
    const double t = ctx.param("t0", ctx.config.times.front());
    const double x = ctx.param("x", 0.0);
    const double u = ctx.param("u", 0.0);
    const double lmax = ctx.param("lmax", 10.0);
    Csv csv({"lambda", "re", "im", "abs"});
    std::size_t skipped = 0;
    for (int k = 0; k < steps; ++k) {
      const double lambda = -lmax + 2.0 * lmax * k / (steps - 1);
      try {
        const cplx v = hz::schrodinger_integrand(lambda, x, u, t);
        csv.row({lambda, v.real(), v.imag(), std::abs(v)});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EvaluationAtSingularity) throw;
        ++skipped;
      }
    }
    const int kmax = std::max(1, static_cast<int>(std::floor(lmax * t / std::numbers::pi)));
    const auto sing = hz::singularities(t, kmax);
    std::string list;
    for (std::size_t i = 0; i < sing.size(); ++i) list += (i ? "," : "") + format_number(sing[i]);
    ctx.note("singularities", list);
    ctx.result("samples_skipped_at_singularities", static_cast<double>(skipped));
    emit_csv(ctx, csv);
  } else if (action == "heat") {
    const double t = ctx.param("t0", ctx.config.times.front());
    const auto v = hz::heat_kernel(ctx.param("x", 0.0), ctx.param("u", 0.0), ctx.param("xi", 0.0), t,
                                   ctx.param("quad_tol", 1e-10));
    ctx.result("re", v.value.real());
    ctx.result("im", v.value.imag());
    ctx.result("error_estimate", v.error_estimate);
    ctx.result("lambda_cutoff", v.lambda_cutoff);
    ctx.result("intervals", v.intervals);
    ctx.note("normalization", "unnormalized");
  } else {
    fail(ErrorCode::ConfigError, "heisenberg: unknown action '" + action + "' (geodesic, integrand, heat)");
  }
}

void cmd_reproduce(Context& ctx) {
  const auto results = run_acceptance(ctx.config.seed);
  bool all = true;
  for (const auto& r : results) {
    ctx.result("criterion_" + std::to_string(r.id), r.pass ? 1.0 : 0.0);
    all = all && r.pass;
  }
  ctx.note("summary", all ? "all criteria pass" : "some criteria fail");
  const std::string path = ctx.config.output.empty() ? "reproduce_summary.md" : ctx.config.output;
  write_file(path, summary_table(results));
  ctx.record.artifacts.push_back(path);
  if (!all) ctx.record.exit_status = exit_status(ErrorCode::InvariantViolation);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void apply_setting(RunConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "group") {
    if (value.empty()) fail(ErrorCode::ConfigError, "config: group must not be empty");
    c.group = value;
  } else if (key == "grid") {
    c.grid = parse_grid(key, value);
  } else if (key == "spectral_grid") {
    c.spectral_grid = parse_grid(key, value);
  } else if (key == "t" || key == "times") {
    auto times = parse_list(key, value);
    for (double t : times) {
      if (!(t > 0.0)) fail(ErrorCode::ConfigError, "config: times must be positive, got " + format_number(t));
    }
    c.times = std::move(times);
    c.times_given = true;
  } else if (key == "init") {
    parse_gaussian_init(value);
    c.init = value;
  } else if (key == "seed") {
    std::uint64_t s = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
      fail(ErrorCode::ConfigError, "config: seed expects a 64-bit unsigned integer, got '" + value + "'");
    }
    c.seed = s;
  } else if (key == "output") {
    c.output = value;
  } else if (key == "format") {
    if (value != "csv" && value != "jsonl") fail(ErrorCode::ConfigError, "config: format must be csv or jsonl");
    c.format = value;
  } else if (key == "method") {
    if (value != "closed" && value != "spectral") fail(ErrorCode::ConfigError, "config: method must be closed or spectral");
    c.method = value;
  } else if (key == "mode") {
    if (value != "scaled" && value != "fixed") fail(ErrorCode::ConfigError, "config: mode must be scaled or fixed");
    c.mode = value;
  } else if (key == "action") {
    c.action = value;
  } else if (key.rfind("tol.", 0) == 0 && key.size() > 4) {
    const double v = parse_double(key, value);
    if (!(v > 0.0)) fail(ErrorCode::ConfigError, "config: " + key + " must be positive");
    c.tolerances[key.substr(4)] = v;
  } else if (kParamKeys.contains(key)) {
    c.params[key] = value;
  } else {
    fail(ErrorCode::ConfigError, "config: unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ConfigError, "config: line " + std::to_string(line_no) + " is not key = value");
    }
    apply_setting(c, std::string_view(line).substr(0, eq), std::string_view(line).substr(eq + 1));
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out{
      {"group", c.group},
      {"grid", grid_text(c.grid)},
      {"spectral_grid", c.spectral_grid ? grid_text(*c.spectral_grid) : "auto"},
      {"times", list_text(c.times)},
      {"init", c.init},
      {"seed", std::to_string(c.seed)},
      {"output", c.output},
      {"format", c.format},
      {"method", c.method},
      {"mode", c.mode},
      {"action", c.action},
  };
  for (const auto& [k, v] : c.tolerances) out.emplace_back("tol." + k, format_number(v));
  for (const auto& [k, v] : c.params) out.emplace_back(k, v);
  return out;
}

std::string ResultRecord::to_json_line() const {
  json j;
  j["command"] = command;
  json cfg = json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  json res = json::object();
  for (const auto& [k, v] : results) {
    if (std::isfinite(v)) {
      res[k] = v;
    } else {
      res[k] = format_number(v);
    }
  }
  j["results"] = res;
  json tol = json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  j["tolerances"] = tol;
  json notes_j = json::object();
  for (const auto& [k, v] : notes) notes_j[k] = v;
  j["notes"] = notes_j;
  j["artifacts"] = artifacts;
  j["exit_status"] = exit_status;
  return j.dump();
}

ResultRecord run(std::string_view command, const RunConfig& config) {
  ResultRecord record;
  record.command = std::string(command);
  record.config = describe(config);
  Context ctx{config, record};
  const auto start = std::chrono::steady_clock::now();
  try {
    if (command == "rootsys") {
      cmd_rootsys(ctx);
    } else if (command == "spherical") {
      cmd_spherical(ctx);
    } else if (command == "evolve") {
      cmd_evolve(ctx);
    } else if (command == "hardy-check") {
      cmd_hardy(ctx);
    } else if (command == "decay-fit") {
      cmd_decay(ctx);
    } else if (command == "strichartz") {
      cmd_strichartz(ctx);
    } else if (command == "heisenberg") {
      cmd_heisenberg(ctx);
    } else if (command == "reproduce") {
      cmd_reproduce(ctx);
    } else {
      fail(ErrorCode::ConfigError, "run: unknown command '" + std::string(command) + "'");
    }
  } catch (const Error& e) {
    // what() is "<code>: <message>"; rethrow as "<code>: <command>: <message>".
    std::string message = e.what();
    const std::string code = std::string(to_string(e.code())) + ": ";
    if (message.rfind(code, 0) == 0) message.erase(0, code.size());
    const std::string prefix = std::string(command) + ": ";
    throw Error(e.code(), message.rfind(prefix, 0) == 0 ? message : prefix + message);
  }
  record.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.output.empty() && config.format == "jsonl" && command != "reproduce") {
    write_file(config.output, record.to_json_line() + "\n");
    record.artifacts.push_back(config.output);
  }
  return record;
}

}  // namespace lsg
