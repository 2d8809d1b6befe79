#include "polytoep/symbol_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "polytoep/errors.hpp"

namespace polytoep {

namespace {

// The DOM keeps no positions, so field errors locate the line of the
// `occurrence`-th appearance of "key" in the raw text (0 if not found).
int line_of_key(const std::string& text, const std::string& key, int occurrence) {
  if (text.empty()) return 0;
  std::string needle = "\"" + key + "\"";
  std::size_t pos = 0;
  for (int i = 0; i <= occurrence; ++i) {
    pos = text.find(needle, i == 0 ? 0 : pos + 1);
    if (pos == std::string::npos) return 0;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

struct Ctx {
  const std::string& source;
  const std::string& text;
  [[noreturn]] void fail(const std::string& field, const std::string& key, int occurrence,
                         const std::string& msg) const {
    throw ParseError(source, line_of_key(text, key, occurrence), field, msg);
  }
};

int get_positive_int(const Json& doc, const char* key, const Ctx& ctx) {
  if (!doc.contains(key)) ctx.fail(key, key, 0, "missing");
  const Json& v = doc.at(key);
  if (!v.is_number_integer()) ctx.fail(key, key, 0, "expected an integer");
  int x = v.get<int>();
  if (x < 1) ctx.fail(key, key, 0, "must be >= 1");
  return x;
}

LaurentSymbol from_json_impl(const Json& doc, const Ctx& ctx) {
  if (!doc.is_object()) ctx.fail("<root>", "", 0, "expected an object");
  int n = get_positive_int(doc, "n", ctx);
  int dout = get_positive_int(doc, "dim_out", ctx);
  int din = get_positive_int(doc, "dim_in", ctx);
  if (!doc.contains("terms")) ctx.fail("terms", "terms", 0, "missing");
  const Json& terms = doc.at("terms");
  if (!terms.is_array()) ctx.fail("terms", "terms", 0, "expected an array");

  std::vector<std::pair<MultiIndex, Matrix>> out;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const Json& term = terms[t];
    int occ = static_cast<int>(t);
    std::string where = "terms[" + std::to_string(t) + "]";
    if (!term.is_object() || !term.contains("k"))
      ctx.fail(where + ".k", "k", occ, "missing exponent");
    if (!term.contains("c")) ctx.fail(where + ".c", "c", occ, "missing coefficient");
    const Json& jk = term.at("k");
    if (!jk.is_array() || static_cast<int>(jk.size()) != n)
      ctx.fail(where + ".k", "k", occ, "expected " + std::to_string(n) + " integers");
    std::vector<int> k;
    for (const Json& e : jk) {
      if (!e.is_number_integer()) ctx.fail(where + ".k", "k", occ, "non-integer exponent");
      k.push_back(e.get<int>());
    }
    const Json& jc = term.at("c");
    if (!jc.is_array() || static_cast<int>(jc.size()) != dout * din)
      ctx.fail(where + ".c", "c", occ,
               "expected " + std::to_string(dout * din) + " [re, im] entries");
    Matrix c(dout, din);
    for (int idx = 0; idx < dout * din; ++idx) {
      const Json& e = jc[idx];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        ctx.fail(where + ".c[" + std::to_string(idx) + "]", "c", occ, "expected [re, im]");
      c(idx / din, idx % din) = Complex(e[0].get<double>(), e[1].get<double>());
    }
    out.emplace_back(MultiIndex(std::move(k)), std::move(c));
  }
  return LaurentSymbol(n, dout, din, out);
}

}  // namespace

Json symbol_to_json(const LaurentSymbol& phi) {
  Json doc;
  doc["n"] = phi.n();
  doc["dim_out"] = phi.dim_out();
  doc["dim_in"] = phi.dim_in();
  Json terms = Json::array();
  for (const auto& [k, c] : phi.terms()) {
    Json term;
    term["k"] = k.entries();
    Json entries = Json::array();
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) entries.push_back({c(i, j).real(), c(i, j).imag()});
    term["c"] = std::move(entries);
    terms.push_back(std::move(term));
  }
  doc["terms"] = std::move(terms);
  return doc;
}

LaurentSymbol symbol_from_json(const Json& doc, const std::string& source) {
  static const std::string no_text;
  return from_json_impl(doc, Ctx{source, no_text});
}

std::string dump_symbol(const LaurentSymbol& phi) {
  // One term per line keeps files diffable and error lines meaningful.
  Json doc = symbol_to_json(phi);
  std::ostringstream os;
  os << "{\n  \"n\": " << phi.n() << ",\n  \"dim_out\": " << phi.dim_out()
     << ",\n  \"dim_in\": " << phi.dim_in() << ",\n  \"terms\": [";
  const Json& terms = doc["terms"];
  for (std::size_t t = 0; t < terms.size(); ++t) {
    os << (t ? ",\n    " : "\n    ") << terms[t].dump();
  }
  os << (terms.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

LaurentSymbol parse_symbol(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
    throw ParseError(source, line, "<syntax>", e.what());
  }
  return from_json_impl(doc, Ctx{source, text});
}

LaurentSymbol read_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "<file>", "cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_symbol(ss.str(), path);
}

void write_symbol(const std::string& path, const LaurentSymbol& phi) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << dump_symbol(phi);
}

}  // namespace polytoep
