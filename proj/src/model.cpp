#include "motint/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "motint/error.hpp"

namespace motint {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based column of value
};

std::string trim(std::string_view s, std::size_t& offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  offset = b;
  return std::string(s.substr(b, e - b));
}

std::string trim(std::string_view s) {
  std::size_t ignored;
  return trim(s, ignored);
}

[[noreturn]] void parse_fail(const Entry& at, const std::string& message) {
  throw ParseError(at.line, at.column, message);
}

[[noreturn]] void invalid(const Entry& at, const std::string& message) {
  throw Error(ErrorCode::ValidationError, "line " + std::to_string(at.line) + ": " + message);
}

// Runs a literal parser on an entry, relocating its errors into the file.
template <class F>
auto literal(const Entry& at, F&& f) -> decltype(f(at.value)) {
  try {
    return f(at.value);
  } catch (const ParseError& e) {
    const std::size_t col = e.line() == 0 ? at.column + (e.column() ? e.column() - 1 : 0) : at.column;
    throw ParseError(at.line, col, e.detail());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, "line " + std::to_string(at.line) + ": " + e.what());
  }
}

long integer(const Entry& at) {
  const std::string& s = at.value;
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) parse_fail(at, "expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t unsigned_integer(const Entry& at) {
  const std::string& s = at.value;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    parse_fail(at, "expected a non-negative integer, got '" + s + "'");
  return v;
}

bool boolean(const Entry& at) {
  if (at.value == "true") return true;
  if (at.value == "false") return false;
  parse_fail(at, "expected true or false, got '" + at.value + "'");
}

mpq_class rational(const Entry& at) {
  mpq_class q;
  if (at.value.empty() || q.set_str(at.value, 10) != 0) parse_fail(at, "expected a rational number, got '" + at.value + "'");
  q.canonicalize();
  return q;
}

// Pieces of a comma-separated list, each with its column.
std::vector<Entry> split(const Entry& at, char sep) {
  std::vector<Entry> out;
  std::size_t start = 0;
  const std::string& s = at.value;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] != sep) continue;
    std::size_t off;
    std::string piece = trim(std::string_view(s).substr(start, i - start), off);
    out.push_back({piece, at.line, at.column + start + off});
    start = i + 1;
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::vector<std::vector<long>> matrix(const Entry& at) {
  const std::string& s = at.value;
  std::size_t pos = 0;
  auto fail = [&](const std::string& message) { throw ParseError(at.line, at.column + pos, message); };
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  };
  auto number = [&] {
    skip();
    std::size_t start = pos;
    if (pos < s.size() && s[pos] == '-') ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && s[start] == '-')) fail("expected an integer");
    return std::stol(s.substr(start, pos - start));
  };
  std::vector<std::vector<long>> rows;
  expect('[');
  skip();
  if (pos < s.size() && s[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      std::vector<long> row;
      expect('[');
      skip();
      if (pos < s.size() && s[pos] == ']') {
        ++pos;
      } else {
        while (true) {
          row.push_back(number());
          skip();
          if (pos < s.size() && s[pos] == ',') {
            ++pos;
            continue;
          }
          expect(']');
          break;
        }
      }
      rows.push_back(std::move(row));
      skip();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      expect(']');
      break;
    }
  }
  skip();
  if (pos != s.size()) fail("trailing input after matrix");
  return rows;
}

std::string matrix_to_string(const std::vector<std::vector<long>>& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (r) out += ",";
    out += "[";
    for (std::size_t c = 0; c < m[r].size(); ++c) out += (c ? "," : "") + std::to_string(m[r][c]);
    out += "]";
  }
  return out + "]";
}

// `key = value` split, columns preserved.
std::pair<Entry, Entry> key_value(const Entry& at) {
  auto eq = at.value.find('=');
  if (eq == std::string::npos) parse_fail(at, "expected 'key = value'");
  std::size_t koff, voff;
  std::string key = trim(std::string_view(at.value).substr(0, eq), koff);
  std::string value = trim(std::string_view(at.value).substr(eq + 1), voff);
  Entry k{key, at.line, at.column + koff};
  Entry v{value, at.line, at.column + eq + 1 + voff};
  if (!is_identifier(key)) parse_fail(k, "expected a key before '='");
  if (value.empty()) parse_fail(v, "missing value for '" + key + "'");
  return {k, v};
}

struct RawFile {
  Entry kind;
  std::map<std::string, Entry> keys;
  std::vector<Entry> polys;
  std::vector<Entry> divisors;
  std::vector<Entry> strata;
};

const std::set<std::string>& allowed_keys(ModelFile::Kind kind) {
  static const std::map<ModelFile::Kind, std::set<std::string>> keys{
      {ModelFile::Kind::Resolution, {"d", "total"}},
      {ModelFile::Kind::Polyhedral, {"d", "delta"}},
      {ModelFile::Kind::Variety, {"vars", "d", "polynomial_class", "condition", "params"}},
      {ModelFile::Kind::Series, {"num", "den", "d"}},
      {ModelFile::Kind::Presburger, {"m", "condition", "phi", "degree"}},
  };
  return keys.at(kind);
}

const std::set<std::string> kJobKeys{"q", "n_max", "j_max", "n", "threads", "budget", "output"};

ModelFile::Kind parse_kind(const Entry& at) {
  for (auto k : {ModelFile::Kind::Resolution, ModelFile::Kind::Polyhedral, ModelFile::Kind::Variety,
                 ModelFile::Kind::Series, ModelFile::Kind::Presburger})
    if (at.value == kind_name(k)) return k;
  parse_fail(at, "unknown kind '" + at.value + "' (expected resolution, polyhedral, variety, series or presburger)");
}

RawFile read_lines(std::string_view text, ModelFile::Kind& kind) {
  RawFile raw;
  bool have_kind = false;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t off;
    std::string body = trim(line, off);
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }
    Entry whole{body, line_no, off + 1};
    auto word_end = body.find_first_of(" \t=");
    std::string word = body.substr(0, word_end);
    if (word == "divisor" || word == "stratum" || word == "poly") {
      if (!have_kind) parse_fail(whole, "the first entry must be 'kind = ...'");
      std::size_t roff;
      std::string rest = trim(std::string_view(body).substr(word.size()), roff);
      Entry tail{rest, line_no, whole.column + word.size() + roff};
      if (word == "poly") {
        // `poly = f`
        if (rest.empty() || rest[0] != '=') parse_fail(tail, "expected '=' after poly");
        std::size_t voff;
        std::string v = trim(std::string_view(rest).substr(1), voff);
        Entry value{v, line_no, tail.column + 1 + voff};
        if (v.empty()) parse_fail(value, "missing polynomial");
        if (kind != ModelFile::Kind::Variety) parse_fail(whole, "'poly' is only valid in variety files");
        raw.polys.push_back(value);
      } else if (word == "divisor") {
        if (kind != ModelFile::Kind::Resolution) parse_fail(whole, "'divisor' is only valid in resolution files");
        raw.divisors.push_back(tail);
      } else {
        if (kind != ModelFile::Kind::Resolution && kind != ModelFile::Kind::Polyhedral)
          parse_fail(whole, "'stratum' is only valid in resolution and polyhedral files");
        raw.strata.push_back(tail);
      }
      if (end == text.size()) break;
      continue;
    }
    auto [k, v] = key_value(whole);
    if (k.value == "kind") {
      if (have_kind) parse_fail(k, "kind is declared twice");
      kind = parse_kind(v);
      raw.kind = v;
      have_kind = true;
    } else {
      if (!have_kind) parse_fail(k, "the first entry must be 'kind = ...'");
      if (!kJobKeys.count(k.value) && !allowed_keys(kind).count(k.value))
        parse_fail(k, "unknown key '" + k.value + "' for kind " + std::string(kind_name(kind)));
      if (!raw.keys.emplace(k.value, v).second) parse_fail(k, "duplicate key '" + k.value + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_kind) throw ParseError(line_no ? line_no : 1, 1, "missing 'kind = ...'");
  return raw;
}

std::map<std::string, Entry> attributes(const Entry& at, const std::set<std::string>& allowed) {
  std::map<std::string, Entry> out;
  if (at.value.empty()) return out;
  for (const auto& piece : split(at, ';')) {
    auto [k, v] = key_value(piece);
    if (!allowed.count(k.value)) parse_fail(k, "unknown attribute '" + k.value + "'");
    if (!out.emplace(k.value, v).second) parse_fail(k, "duplicate attribute '" + k.value + "'");
  }
  return out;
}

const Entry* find(const std::map<std::string, Entry>& keys, const std::string& key) {
  auto it = keys.find(key);
  return it == keys.end() ? nullptr : &it->second;
}

const Entry& require(const RawFile& raw, const std::string& key) {
  if (const Entry* e = find(raw.keys, key)) return *e;
  throw Error(ErrorCode::ValidationError, std::string(kind_name(parse_kind(raw.kind))) + " file needs '" + key + "'");
}

void build_resolution(const RawFile& raw, ResolutionData& res) {
  res.d = integer(require(raw, "d"));
  for (const auto& line : raw.divisors) {
    auto space = line.value.find_first_of(" \t");
    std::string name = line.value.substr(0, space);
    if (!is_identifier(name)) parse_fail(line, "expected a divisor name");
    std::size_t off = 0;
    std::string rest = space == std::string::npos ? "" : trim(std::string_view(line.value).substr(space), off);
    Entry tail{rest, line.line, line.column + (space == std::string::npos ? line.value.size() : space + off)};
    auto attrs = attributes(tail, {"nu", "N"});
    Divisor div;
    div.name = name;
    const Entry* nu = find(attrs, "nu");
    if (!nu) parse_fail(line, "divisor " + name + " needs nu");
    div.nu = integer(*nu);
    if (const Entry* N = find(attrs, "N")) div.N = integer(*N);
    res.divisors.push_back(div);
  }
  for (const auto& line : raw.strata) {
    if (line.value.empty() || line.value[0] != '{') parse_fail(line, "expected '{divisors}' after stratum");
    auto close = line.value.find('}');
    if (close == std::string::npos) parse_fail(line, "missing '}'");
    Entry inside{line.value.substr(1, close - 1), line.line, line.column + 1};
    Stratum s;
    if (!trim(inside.value).empty()) {
      for (const auto& name : split(inside, ',')) {
        auto idx = res.divisor_index(name.value);
        if (!idx) invalid(name, "stratum refers to undeclared divisor '" + name.value + "'");
        s.subset.push_back(*idx);
      }
    }
    std::sort(s.subset.begin(), s.subset.end());
    std::size_t off;
    std::string rest = trim(std::string_view(line.value).substr(close + 1), off);
    Entry tail{rest, line.line, line.column + close + 1 + off};
    auto attrs = attributes(tail, {"class", "chi", "hodge", "restricted"});
    if (const Entry* c = find(attrs, "class")) s.cls = literal(*c, [](const std::string& t) { return parse_mot_class(t); });
    if (const Entry* c = find(attrs, "chi")) s.chi = rational(*c);
    if (const Entry* c = find(attrs, "hodge")) s.hodge = literal(*c, [](const std::string& t) { return parse_hodge(t); });
    if (const Entry* c = find(attrs, "restricted")) s.restricted = boolean(*c);
    res.strata.push_back(std::move(s));
  }
  if (const Entry* t = find(raw.keys, "total")) res.total = literal(*t, [](const std::string& x) { return parse_mot_class(x); });
  res.validate();
}

void build_polyhedral(const RawFile& raw, PolyhedralModel& model) {
  if (const Entry* d = find(raw.keys, "d")) model.d = integer(*d);
  if (const Entry* delta = find(raw.keys, "delta"))
    model.delta = literal(*delta, [](const std::string& t) { return parse_polyhedron(t); });
  for (const auto& line : raw.strata) {
    auto attrs = attributes(line, {"class", "delta"});
    const Entry* c = find(attrs, "class");
    if (!c) parse_fail(line, "polyhedral stratum needs a class");
    PolyhedralStratum s{literal(*c, [](const std::string& t) { return parse_mot_class(t); }), std::nullopt};
    if (const Entry* delta = find(attrs, "delta"))
      s.delta = literal(*delta, [](const std::string& t) { return parse_polyhedron(t); });
    model.strata.push_back(std::move(s));
  }
  if (model.strata.empty() && !model.delta)
    throw Error(ErrorCode::ValidationError, "polyhedral file needs strata or a delta");
  if (!model.strata.empty() && !find(raw.keys, "d"))
    throw Error(ErrorCode::ValidationError, "polyhedral file with strata needs 'd'");
  if (model.d < 1) throw Error(ErrorCode::ValidationError, "dimension d must be >= 1");
}

void build_variety(const RawFile& raw, VarietyModel& model) {
  const Entry& vars = require(raw, "vars");
  std::set<std::string> seen;
  for (const auto& v : split(vars, ',')) {
    if (!is_identifier(v.value)) parse_fail(v, "expected a variable name");
    if (!seen.insert(v.value).second) parse_fail(v, "variable '" + v.value + "' is listed twice");
    model.x.vars.push_back(v.value);
  }
  for (const auto& p : raw.polys)
    model.x.polys.push_back(literal(p, [&](const std::string& t) { return parse_int_poly(t, model.x.vars); }));
  model.x.d = integer(require(raw, "d"));
  if (const Entry* pc = find(raw.keys, "polynomial_class")) model.x.polynomial_class = boolean(*pc);
  if (const Entry* c = find(raw.keys, "condition")) {
    model.condition_text = c->value;
    model.condition = literal(*c, [&](const std::string& t) { return parse_semialg(t, model.x.vars); });
  }
  if (const Entry* ps = find(raw.keys, "params"))
    for (const auto& p : split(*ps, ',')) model.params.push_back(integer(p));
  literal(vars, [&](const std::string&) {
    model.x.validate();
    return 0;
  });
}

void build_series(const RawFile& raw, SeriesModel& model) {
  const Entry& num = require(raw, "num");
  const Entry& den = require(raw, "den");
  TPoly n = literal(num, [](const std::string& t) { return parse_tpoly(t); });
  auto f = literal(den, [](const std::string& t) { return parse_den_factors(t); });
  model.p = literal(den, [&](const std::string&) { return RationalMotSeries(n, f); });
  if (const Entry* d = find(raw.keys, "d")) model.d = integer(*d);
}

void build_presburger(const RawFile& raw, PresburgerModel& model) {
  const long m = integer(require(raw, "m"));
  const Entry& c = require(raw, "condition");
  model.set = literal(c, [&](const std::string& t) { return parse_presburger(m, t); });
  if (const Entry* phi = find(raw.keys, "phi")) {
    model.phi = matrix(*phi);
    for (const auto& row : *model.phi)
      if (static_cast<long>(row.size()) != m) invalid(*phi, "each row of phi needs m = " + std::to_string(m) + " entries");
  }
  if (const Entry* deg = find(raw.keys, "degree")) {
    model.degree = integer(*deg);
    if (*model.degree < 0) invalid(*deg, "degree must be >= 0");
  }
}

void build_job(const RawFile& raw, JobParams& job) {
  auto get = [&](const char* key, std::optional<long>& slot) {
    if (const Entry* e = find(raw.keys, key)) slot = integer(*e);
  };
  get("q", job.q);
  get("n_max", job.n_max);
  get("j_max", job.j_max);
  get("n", job.n);
  get("threads", job.threads);
  if (const Entry* e = find(raw.keys, "budget")) job.budget = unsigned_integer(*e);
  if (const Entry* e = find(raw.keys, "output")) job.output = e->value;
}

}  // namespace

std::string_view kind_name(ModelFile::Kind kind) {
  switch (kind) {
    case ModelFile::Kind::Resolution:
      return "resolution";
    case ModelFile::Kind::Polyhedral:
      return "polyhedral";
    case ModelFile::Kind::Variety:
      return "variety";
    case ModelFile::Kind::Series:
      return "series";
    case ModelFile::Kind::Presburger:
      return "presburger";
  }
  return "?";
}

ModelFile parse_model(std::string_view text) {
  ModelFile model;
  RawFile raw = read_lines(text, model.kind);
  switch (model.kind) {
    case ModelFile::Kind::Resolution:
      build_resolution(raw, model.resolution);
      break;
    case ModelFile::Kind::Polyhedral:
      build_polyhedral(raw, model.polyhedral);
      break;
    case ModelFile::Kind::Variety:
      build_variety(raw, model.variety);
      break;
    case ModelFile::Kind::Series:
      build_series(raw, model.series);
      break;
    case ModelFile::Kind::Presburger:
      build_presburger(raw, model.presburger);
      break;
  }
  build_job(raw, model.job);
  return model;
}

std::string print_model(const ModelFile& model) {
  std::string out = "kind = " + std::string(kind_name(model.kind)) + "\n";
  auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  switch (model.kind) {
    case ModelFile::Kind::Resolution: {
      const auto& res = model.resolution;
      line("d", std::to_string(res.d));
      for (const auto& div : res.divisors) {
        out += "divisor " + div.name + " nu = " + std::to_string(div.nu);
        if (div.N) out += "; N = " + std::to_string(*div.N);
        out += "\n";
      }
      for (const auto& s : res.strata) {
        out += "stratum {";
        for (std::size_t k = 0; k < s.subset.size(); ++k) out += (k ? "," : "") + res.divisors[s.subset[k]].name;
        out += "}";
        std::vector<std::string> attrs;
        if (s.cls) attrs.push_back("class = " + s.cls->to_string());
        if (s.chi) attrs.push_back("chi = " + s.chi->get_str());
        if (s.hodge) attrs.push_back("hodge = " + s.hodge->to_string());
        if (s.restricted) attrs.push_back("restricted = true");
        for (std::size_t k = 0; k < attrs.size(); ++k) out += (k ? "; " : " ") + attrs[k];
        out += "\n";
      }
      if (res.total) line("total", res.total->to_string());
      break;
    }
    case ModelFile::Kind::Polyhedral: {
      const auto& p = model.polyhedral;
      line("d", std::to_string(p.d));
      if (p.delta) line("delta", p.delta->to_string());
      for (const auto& s : p.strata) {
        out += "stratum class = " + s.cls.to_string();
        if (s.delta) out += "; delta = " + s.delta->to_string();
        out += "\n";
      }
      break;
    }
    case ModelFile::Kind::Variety: {
      const auto& v = model.variety;
      std::string vars;
      for (std::size_t k = 0; k < v.x.vars.size(); ++k) vars += (k ? ", " : "") + v.x.vars[k];
      line("vars", vars);
      for (const auto& p : v.x.polys) line("poly", int_poly_to_string(p, v.x.vars));
      line("d", std::to_string(v.x.d));
      line("polynomial_class", v.x.polynomial_class ? "true" : "false");
      if (v.condition_text) line("condition", *v.condition_text);
      if (!v.params.empty()) {
        std::string ps;
        for (std::size_t k = 0; k < v.params.size(); ++k) ps += (k ? ", " : "") + std::to_string(v.params[k]);
        line("params", ps);
      }
      break;
    }
    case ModelFile::Kind::Series:
      line("num", model.series.p.num_to_string());
      line("den", model.series.p.den_to_string());
      if (model.series.d) line("d", std::to_string(*model.series.d));
      break;
    case ModelFile::Kind::Presburger: {
      const auto& p = model.presburger;
      line("m", std::to_string(p.set.m()));
      line("condition", p.set.to_string());
      if (p.phi) line("phi", matrix_to_string(*p.phi));
      if (p.degree) line("degree", std::to_string(*p.degree));
      break;
    }
  }
  const auto& job = model.job;
  auto opt = [&](const char* key, const std::optional<long>& v) {
    if (v) line(key, std::to_string(*v));
  };
  opt("q", job.q);
  opt("n_max", job.n_max);
  opt("j_max", job.j_max);
  opt("n", job.n);
  opt("threads", job.threads);
  if (job.budget) line("budget", std::to_string(*job.budget));
  if (job.output) line("output", *job.output);
  return out;
}

}  // namespace motint
