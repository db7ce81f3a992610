#include "motint/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "motint/hodge.hpp"
#include "motint/model.hpp"

namespace motint::cli {

int exit_code(ErrorCode code) {
  return code == ErrorCode::ParseError || code == ErrorCode::ValidationError ? 2 : 1;
}

namespace {

struct Flags {
  std::optional<long> q, n_max, j_max, n, threads, d, order;
  std::optional<std::uint64_t> budget;
  std::optional<std::string> output;
  bool ideal = false;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Flags flags;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct LoadedModel {
  std::string path;
  ModelFile model;
};

LoadedModel load(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return {path, parse_model(text)};
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void expect_kind(const LoadedModel& m, ModelFile::Kind kind, const std::string& command) {
  if (m.model.kind != kind)
    throw Error(ErrorCode::InvalidArgument, command + " needs a " + std::string(kind_name(kind)) + " file, but " + m.path +
                                                " declares kind = " + std::string(kind_name(m.model.kind)));
}

bool is_file(const std::string& arg) {
  std::error_code ec;
  return std::filesystem::is_regular_file(arg, ec);
}

template <class T>
T pick(const std::optional<T>& flag, const std::optional<T>& file, T fallback) {
  if (flag) return *flag;
  if (file) return *file;
  return fallback;
}

long required(const std::optional<long>& flag, const std::optional<long>& file, const char* name) {
  if (flag) return *flag;
  if (file) return *file;
  throw Error(ErrorCode::InvalidArgument, std::string("missing --") + name);
}

// CSV goes to --output (or the file's `output` key) when given, else stdout.
class CsvSink {
 public:
  CsvSink(Context& ctx, const JobParams& job) {
    if (auto path = ctx.flags.output ? ctx.flags.output : job.output) {
      file_.open(*path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::InvalidArgument, "cannot write '" + *path + "'");
      stream_ = &file_;
    } else {
      stream_ = &ctx.out;
    }
  }

  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

JetOptions jet_options(const Context& ctx, const JobParams& job) {
  JetOptions opts;
  opts.budget = pick<std::uint64_t>(ctx.flags.budget, job.budget, default_budget());
  opts.threads = static_cast<int>(pick<long>(ctx.flags.threads, job.threads, 1));
  if (opts.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");
  return opts;
}

void caveat(Context& ctx, const JetVariety& x) {
  if (!x.polynomial_class)
    ctx.err << "note: point counts realize the class at L = q only when [X] is declared polynomial in L\n";
}

std::pair<long, long> level_range(const Context& ctx, const JobParams& job) {
  if (ctx.flags.n || job.n) {
    long n = pick<long>(ctx.flags.n, job.n, 0);
    return {n, n};
  }
  return {0, pick<long>(ctx.flags.n_max, job.n_max, 3)};
}

// ---------------------------------------------------------------------------

int cmd_volume(Context& ctx, const std::string& path, bool ideal) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Resolution, ideal ? "volume-ideal" : "volume");
  auto v = ideal ? volume_with_ideal(m.model.resolution) : volume_from_resolution(m.model.resolution);
  ctx.out << v.to_string() << "\n";
  return 0;
}

int cmd_volume_polyhedra(Context& ctx, const std::string& path) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Polyhedral, "volume-polyhedra");
  if (m.model.polyhedral.strata.empty()) throw Error(ErrorCode::ValidationError, path + ": no strata");
  ctx.out << volume_from_polyhedra(m.model.polyhedral.d, m.model.polyhedral.strata).to_string() << "\n";
  return 0;
}

int cmd_kontsevich(Context& ctx, const std::string& path) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Resolution, "kontsevich");
  ctx.out << kontsevich_invariant(m.model.resolution).to_string() << "\n";
  return 0;
}

MotClass literal_class(const std::string& text) {
  try {
    return parse_mot_class(text);
  } catch (const ParseError& e) {
    throw Error(ErrorCode::ParseError, "literal '" + text + "': " + e.what());
  }
}

int cmd_chi(Context& ctx, const std::string& arg) {
  if (is_file(arg)) {
    auto m = load(arg);
    if (m.model.kind == ModelFile::Kind::Resolution) {
      ctx.out << realize_volume_chi(m.model.resolution, ctx.flags.ideal).get_str() << "\n";
    } else if (m.model.kind == ModelFile::Kind::Polyhedral) {
      ctx.out << realize_polyhedra_chi(m.model.polyhedral.d, m.model.polyhedral.strata).get_str() << "\n";
    } else {
      throw Error(ErrorCode::InvalidArgument, "chi needs a resolution or polyhedral file, or a class literal");
    }
    return 0;
  }
  ctx.out << chi_realize(literal_class(arg)).get_str() << "\n";
  return 0;
}

int cmd_hodge(Context& ctx, const std::string& arg) {
  if (is_file(arg)) {
    auto m = load(arg);
    if (m.model.kind == ModelFile::Kind::Resolution) {
      ctx.out << realize_volume_hodge(m.model.resolution, ctx.flags.ideal).to_string() << "\n";
    } else if (m.model.kind == ModelFile::Kind::Polyhedral) {
      ctx.out << realize_polyhedra_hodge(m.model.polyhedral.d, m.model.polyhedral.strata).to_string() << "\n";
    } else {
      throw Error(ErrorCode::InvalidArgument, "hodge needs a resolution or polyhedral file, or a class literal");
    }
    return 0;
  }
  ctx.out << hodge_realize(literal_class(arg)).to_string() << "\n";
  return 0;
}

int cmd_zdelta(Context& ctx, const std::string& arg) {
  std::vector<NewtonPolyhedron> deltas;
  if (is_file(arg)) {
    auto m = load(arg);
    expect_kind(m, ModelFile::Kind::Polyhedral, "zdelta");
    if (m.model.polyhedral.delta) deltas.push_back(*m.model.polyhedral.delta);
    for (const auto& s : m.model.polyhedral.strata)
      if (s.delta) deltas.push_back(*s.delta);
    if (deltas.empty()) throw Error(ErrorCode::ValidationError, arg + ": no polyhedra");
  } else {
    try {
      deltas.push_back(parse_polyhedron(arg));
    } catch (const ParseError& e) {
      throw Error(ErrorCode::ParseError, "literal '" + arg + "': " + e.what());
    }
  }
  for (const auto& delta : deltas) {
    ctx.out << z_of_delta(delta).to_string() << "\n";
    if (ctx.flags.order) {
      if (*ctx.flags.order < 0) throw Error(ErrorCode::InvalidArgument, "--order must be >= 0");
      ctx.out << "expansion: " << expand_completion(z_of_delta(delta), *ctx.flags.order).to_string() << "\n";
    }
  }
  return 0;
}

int cmd_genfun(Context& ctx, const std::string& path) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Presburger, "genfun");
  const auto& p = m.model.presburger;
  RationalGF gf = p.phi ? genfun_image(p.set, *p.phi) : genfun(p.set);
  ctx.out << gf.to_string() << "\n";
  if (auto degree = ctx.flags.order ? ctx.flags.order : p.degree)
    ctx.out << "expansion: " << multipoly_to_string(gf.expand(*degree), gf.vars()) << "\n";
  return 0;
}

int cmd_series_expand(Context& ctx, const std::string& path) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Series, "series-expand");
  const long n_max = pick<long>(ctx.flags.n_max, m.model.job.n_max, 5);
  if (n_max < 0) throw Error(ErrorCode::InvalidArgument, "--n-max must be >= 0");
  auto coeffs = expand(m.model.series.p, n_max);
  std::optional<long> q = ctx.flags.q ? ctx.flags.q : m.model.job.q;
  std::vector<mpq_class> values;
  if (q) values = specialize_at_q(m.model.series.p, *q, n_max);
  CsvSink sink(ctx, m.model.job);
  *sink << "n,coefficient,value\n";
  for (long n = 0; n <= n_max; ++n)
    *sink << n << "," << coeffs[n].to_string() << "," << (q ? values[n].get_str() : std::string()) << "\n";
  return 0;
}

int cmd_series_limit(Context& ctx, const std::string& path) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Series, "series-limit");
  const long d = required(ctx.flags.d, m.model.series.d, "d");
  ctx.out << limit_of_coefficients(m.model.series.p, d).to_string() << "\n";
  return 0;
}

std::vector<mpz_class> read_counts(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  auto cells = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, path + ": empty counts file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = cells(line);
  auto col = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto n_col = col("n");
  auto c_col = col("N_n");
  if (!c_col) c_col = col("count");
  if (!n_col || !c_col) throw Error(ErrorCode::ParseError, path + ": header needs columns n and N_n (or count)");
  std::vector<mpz_class> counts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = cells(line);
    auto where = path + ": line " + std::to_string(line_no);
    if (row.size() != header.size()) throw Error(ErrorCode::ParseError, where + ": expected " + std::to_string(header.size()) + " cells");
    mpz_class n, c;
    if (n.set_str(row[*n_col], 10) != 0) throw Error(ErrorCode::ParseError, where + ": bad n");
    if (c.set_str(row[*c_col], 10) != 0) throw Error(ErrorCode::ParseError, where + ": bad count '" + row[*c_col] + "'");
    if (n != static_cast<long>(counts.size())) throw Error(ErrorCode::ParseError, where + ": rows must list n = 0, 1, 2, ... in order");
    counts.push_back(c);
  }
  return counts;
}

int cmd_series_check(Context& ctx, const std::string& series_path, const std::string& counts_path) {
  auto m = load(series_path);
  expect_kind(m, ModelFile::Kind::Series, "series-check");
  const long q = required(ctx.flags.q, m.model.job.q, "q");
  auto counts = read_counts(counts_path);
  auto cmp = compare_counts(m.model.series.p, q, counts);
  ctx.out << "n,expected,observed,match\n";
  for (const auto& r : cmp.rows)
    ctx.out << r.n << "," << r.expected.get_str() << "," << r.observed.get_str() << "," << (r.match ? "yes" : "no") << "\n";
  if (cmp.pass) {
    ctx.out << "pass: " << cmp.rows.size() << " rows agree at L = " << q << "\n";
    return 0;
  }
  ctx.out << "FAIL: first mismatch at n = " << *cmp.first_mismatch << "\n";
  return 1;
}

LoadedModel load_variety(Context& ctx, const std::string& path, const std::string& command) {
  auto m = load(path);
  expect_kind(m, ModelFile::Kind::Variety, command);
  caveat(ctx, m.model.variety.x);
  return m;
}

int cmd_jets_count(Context& ctx, const std::string& path) {
  auto m = load_variety(ctx, path, "jets-count");
  const auto& job = m.model.job;
  const long q = required(ctx.flags.q, job.q, "q");
  const long j_max = pick<long>(ctx.flags.j_max, job.j_max, 4);
  auto [lo, hi] = level_range(ctx, job);
  auto opts = jet_options(ctx, job);
  std::vector<std::vector<std::uint64_t>> profiles;
  for (long n = lo; n <= hi; ++n) profiles.push_back(image_profile(m.model.variety.x, n, q, j_max, opts));
  CsvSink sink(ctx, job);
  *sink << "n,j,count\n";
  for (long n = lo; n <= hi; ++n)
    for (long j = 0; j <= j_max; ++j) *sink << n << "," << j << "," << profiles[n - lo][j] << "\n";
  return 0;
}

int cmd_jets_poincare(Context& ctx, const std::string& path, bool greenberg) {
  auto m = load_variety(ctx, path, greenberg ? "jets-greenberg" : "jets-poincare");
  const auto& job = m.model.job;
  const long q = required(ctx.flags.q, job.q, "q");
  const long n_max = pick<long>(ctx.flags.n_max, job.n_max, 3);
  const long j_max = pick<long>(ctx.flags.j_max, job.j_max, 4);
  auto rows = poincare_table(m.model.variety.x, q, n_max, j_max, jet_options(ctx, job));
  CsvSink sink(ctx, job);
  *sink << (greenberg ? "n,N_n,gamma_hat,stable\n" : "n,N_n,stable\n");
  int status = 0;
  for (const auto& r : rows) {
    if (r.error) {
      *sink << r.n << ",," << (greenberg ? "," : "") << "error\n";
      ctx.err << "error[" << r.error->substr(0, r.error->find(':')) << "]: n = " << r.n << r.error->substr(r.error->find(':'))
              << "\n";
      status = 1;
      continue;
    }
    *sink << r.n << "," << r.count << ",";
    if (greenberg) *sink << (r.stable ? std::to_string(r.n + r.j_star) : std::string()) << ",";
    *sink << (r.stable ? "true" : "false") << "\n";
    if (greenberg && !r.stable) {
      ctx.err << "error[Unstable]: n = " << r.n << ": image counts did not stabilize within j_max = " << j_max << "\n";
      status = 1;
    }
  }
  return status;
}

int cmd_jets_oesterle(Context& ctx, const std::string& path) {
  auto m = load_variety(ctx, path, "jets-oesterle");
  const auto& job = m.model.job;
  const long q = required(ctx.flags.q, job.q, "q");
  const long n_max = pick<long>(ctx.flags.n_max, job.n_max, 3);
  const long j_max = pick<long>(ctx.flags.j_max, job.j_max, 4);
  auto report = oesterle_sequence(m.model.variety.x, q, n_max, j_max, jet_options(ctx, job));
  CsvSink sink(ctx, job);
  *sink << "n,ratio_num,ratio_den\n";
  for (std::size_t n = 0; n < report.ratios.size(); ++n)
    *sink << n << "," << report.ratios[n].get_num().get_str() << "," << report.ratios[n].get_den().get_str() << "\n";
  ctx.err << "differences:";
  for (const auto& d : report.differences) ctx.err << " " << d.get_str();
  ctx.err << "\n";
  for (std::size_t n = 0; n < report.stable.size(); ++n)
    if (!report.stable[n]) ctx.err << "note: n = " << n << " did not stabilize within j_max = " << j_max << "\n";
  if (report.suspicious) ctx.err << "warning: ratios are tending to 0; the declared dimension may be too large\n";
  return 0;
}

int cmd_semialg_count(Context& ctx, const std::string& path) {
  auto m = load_variety(ctx, path, "semialg-count");
  const auto& v = m.model.variety;
  if (!v.condition) throw Error(ErrorCode::ValidationError, path + ": semialg-count needs a 'condition'");
  const auto& job = m.model.job;
  const long q = required(ctx.flags.q, job.q, "q");
  const long j_max = pick<long>(ctx.flags.j_max, job.j_max, 4);
  auto [lo, hi] = level_range(ctx, job);
  auto opts = jet_options(ctx, job);
  std::vector<SemiAlgCount> counts;
  for (long n = lo; n <= hi; ++n) counts.push_back(count_semialg(v.x, *v.condition, n, q, v.params, j_max, opts));
  CsvSink sink(ctx, job);
  *sink << "n,definitely_true,unknown,j_star,stable\n";
  for (long n = lo; n <= hi; ++n) {
    const auto& c = counts[n - lo];
    *sink << n << "," << c.definitely_true << "," << c.unknown << "," << c.j_star << "," << (c.stable ? "true" : "false")
          << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact motivic volumes, zeta-type series and jet counts"};
  app.name("motint");
  app.require_subcommand(1, 1);
  app.fallthrough();
  Context ctx{out, err, {}};
  auto& f = ctx.flags;
  app.add_option("--q", f.q, "prime field size for jets and specializations");
  app.add_option("--n-max", f.n_max, "largest level n");
  app.add_option("--j-max", f.j_max, "largest lifting depth j");
  app.add_option("--n", f.n, "single level n");
  app.add_option("--budget", f.budget, "node budget for enumerations");
  app.add_option("--threads", f.threads, "worker threads for enumerations");
  app.add_option("--output", f.output, "write CSV output to this file");
  app.add_option("--d", f.d, "dimension for series-limit");
  app.add_option("--order", f.order, "expansion order (zdelta) or degree (genfun)");
  app.add_flag("--ideal", f.ideal, "apply the ideal twist (chi, hodge)");

  std::string a1, a2;
  struct Command {
    const char* name;
    const char* help;
    int arity;
  };
  const Command commands[] = {
      {"volume", "volume from resolution data", 1},
      {"volume-ideal", "volume with an ideal twist", 1},
      {"volume-polyhedra", "volume from polyhedral strata", 1},
      {"kontsevich", "Kontsevich invariant with partition check", 1},
      {"chi", "Euler characteristic of a file or a class literal", 1},
      {"hodge", "Hodge realization of a file or a class literal", 1},
      {"zdelta", "closed form Z of a polyhedron file or literal", 1},
      {"genfun", "generating function of a Presburger set", 1},
      {"series-expand", "coefficients of a rational series", 1},
      {"series-limit", "limit of a_n L^-(n+1)d", 1},
      {"series-check", "compare a series with a counts CSV at L = q", 2},
      {"jets-count", "truncation image counts (n, j, count)", 1},
      {"jets-poincare", "stabilized counts (n, N_n, stable)", 1},
      {"jets-greenberg", "Greenberg estimates (n, N_n, gamma_hat, stable)", 1},
      {"jets-oesterle", "ratios N_n / q^((n+1)d)", 1},
      {"semialg-count", "semi-algebraic counts over stabilized images", 1},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("input", a1, c.arity == 2 ? "series file" : "input file or literal")->required();
    if (c.arity == 2) sub->add_option("counts", a2, "counts CSV")->required();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error[ParseError]: " << e.what() << "\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "volume") return cmd_volume(ctx, a1, false);
    if (command == "volume-ideal") return cmd_volume(ctx, a1, true);
    if (command == "volume-polyhedra") return cmd_volume_polyhedra(ctx, a1);
    if (command == "kontsevich") return cmd_kontsevich(ctx, a1);
    if (command == "chi") return cmd_chi(ctx, a1);
    if (command == "hodge") return cmd_hodge(ctx, a1);
    if (command == "zdelta") return cmd_zdelta(ctx, a1);
    if (command == "genfun") return cmd_genfun(ctx, a1);
    if (command == "series-expand") return cmd_series_expand(ctx, a1);
    if (command == "series-limit") return cmd_series_limit(ctx, a1);
    if (command == "series-check") return cmd_series_check(ctx, a1, a2);
    if (command == "jets-count") return cmd_jets_count(ctx, a1);
    if (command == "jets-poincare") return cmd_jets_poincare(ctx, a1, false);
    if (command == "jets-greenberg") return cmd_jets_poincare(ctx, a1, true);
    if (command == "jets-oesterle") return cmd_jets_oesterle(ctx, a1);
    if (command == "semialg-count") return cmd_semialg_count(ctx, a1);
  } catch (const Error& e) {
    err << "error[" << error_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code(e.code());
  }
  return 2;
}

}  // namespace motint::cli
