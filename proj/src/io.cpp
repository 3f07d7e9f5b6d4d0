#include "sharpmult/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sharpmult/errors.hpp"

namespace sharpmult::io {

namespace {

using symbols::Family;

void allow_keys(const Json& spec, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : spec.items())
    require(allowed.count(item.key()) != 0, "unknown key \"" + item.key() + "\" in symbol spec");
}

const Json& field(const Json& spec, const char* key) {
  require(spec.contains(key), std::string("symbol spec lacks \"") + key + "\"");
  return spec.at(key);
}

double number(const Json& value, const std::string& what) {
  require(value.is_number(), what + " must be a number");
  return value.get<double>();
}

int integer(const Json& value, const std::string& what) {
  require(value.is_number_integer(), what + " must be an integer");
  return value.get<int>();
}

std::vector<double> numbers(const Json& value, const std::string& what) {
  require(value.is_array(), what + " must be an array");
  std::vector<double> out;
  for (const auto& x : value) out.push_back(number(x, what + " entry"));
  return out;
}

std::vector<int> subset(const Json& spec) {
  const auto& value = field(spec, "subset");
  require(value.is_array(), "subset must be an array");
  std::vector<int> out;
  for (const auto& x : value) out.push_back(integer(x, "subset entry"));
  return out;
}

/// [[x...], weight, value]
std::tuple<symbols::Vector, double, double> atom(const Json& value, const std::string& what) {
  require(value.is_array() && value.size() == 3, what + " must be [[x...], weight, value]");
  return {numbers(value[0], what + " point"), number(value[1], what + " weight"),
          number(value[2], what + " value")};
}

std::string sign_name(symbols::QuadraticSign sign) {
  return sign == symbols::QuadraticSign::stated ? "stated" : "composition";
}

}  // namespace

symbols::MultiplierSymbol symbol_from_json(const Json& spec) {
  require(spec.is_object(), "symbol spec must be a JSON object");
  const auto& family_value = field(spec, "family");
  require(family_value.is_string(), "family must be a string");
  const auto family = family_value.get<std::string>();
  const int d = integer(field(spec, "d"), "d");
  require(d >= 1, "d must be positive");

  if (family == "quadratic") {
    allow_keys(spec, {"family", "d", "matrix", "sign"});
    const auto& rows = field(spec, "matrix");
    require(rows.is_array() && static_cast<int>(rows.size()) == d, "matrix must have d rows");
    std::vector<double> entries;
    for (const auto& row : rows) {
      const auto values = numbers(row, "matrix row");
      require(static_cast<int>(values.size()) == d, "matrix rows must have d entries");
      entries.insert(entries.end(), values.begin(), values.end());
    }
    auto sign = symbols::QuadraticSign::stated;
    if (spec.contains("sign")) {
      const auto& s = spec.at("sign");
      require(s.is_string() && (s == "stated" || s == "composition"),
              "sign must be \"stated\" or \"composition\"");
      if (s == "composition") sign = symbols::QuadraticSign::composition;
    }
    return symbols::riesz2_symbol(symbols::QuadraticFormSpec(d, std::move(entries)), sign);
  }
  if (family == "partial-riesz") {
    allow_keys(spec, {"family", "d", "subset"});
    return symbols::partial_riesz_symbol(subset(spec), d);
  }
  if (family == "marcinkiewicz") {
    allow_keys(spec, {"family", "d", "subset", "alpha"});
    return symbols::marcinkiewicz_symbol(subset(spec), number(field(spec, "alpha"), "alpha"), d);
  }
  if (family == "split-stable") {
    allow_keys(spec, {"family", "d", "alpha"});
    require(d % 2 == 0, "split-stable symbols need even d");
    return symbols::split_stable_symbol(d / 2, number(field(spec, "alpha"), "alpha"));
  }
  if (family == "log") {
    allow_keys(spec, {"family", "d", "subset"});
    return symbols::log_symbol(subset(spec), d);
  }
  if (family == "levy") {
    allow_keys(spec, {"family", "d", "nu", "sphere", "b", "B"});
    symbols::LevyMeasureSpec levy;
    levy.dimension = d;
    levy.b = number(field(spec, "b"), "b");
    levy.B = number(field(spec, "B"), "B");
    if (spec.contains("nu")) {
      require(spec.at("nu").is_array(), "nu must be an array of atoms");
      for (const auto& a : spec.at("nu")) {
        auto [x, w, phi] = atom(a, "nu atom");
        levy.nu.push_back({std::move(x), w, phi});
      }
    }
    if (spec.contains("sphere")) {
      require(spec.at("sphere").is_array(), "sphere must be an array of atoms");
      for (const auto& a : spec.at("sphere")) {
        auto [theta, u, psi] = atom(a, "sphere atom");
        levy.sphere.push_back({std::move(theta), u, psi});
      }
    }
    return symbols::levy_symbol(levy);
  }
  throw ValidationError("unknown symbol family \"" + family + "\"");
}

Json symbol_to_json(const symbols::MultiplierSymbol& symbol) {
  Json out;
  out["family"] = symbols::to_string(symbol.family());
  out["d"] = symbol.dimension();
  std::visit(
      [&](const auto& params) {
        using T = std::decay_t<decltype(params)>;
        if constexpr (std::is_same_v<T, symbols::QuadraticParams>) {
          Json rows = Json::array();
          const int d = params.form.dimension();
          for (int i = 0; i < d; ++i) {
            Json row = Json::array();
            for (int j = 0; j < d; ++j) row.push_back(params.form.entry(i, j));
            rows.push_back(row);
          }
          out["matrix"] = rows;
          out["sign"] = sign_name(params.sign);
        } else if constexpr (std::is_same_v<T, symbols::PartialRieszParams> ||
                             std::is_same_v<T, symbols::LogParams>) {
          out["subset"] = params.subset;
        } else if constexpr (std::is_same_v<T, symbols::MarcinkiewiczParams>) {
          out["subset"] = params.subset;
          out["alpha"] = params.alpha;
        } else if constexpr (std::is_same_v<T, symbols::SplitStableParams>) {
          out["alpha"] = params.alpha;
        } else {
          Json nu = Json::array();
          for (const auto& a : params.spec.nu) nu.push_back(Json::array({a.point, a.weight, a.phi}));
          Json sphere = Json::array();
          for (const auto& a : params.spec.sphere)
            sphere.push_back(Json::array({a.direction, a.weight, a.psi}));
          out["nu"] = nu;
          out["sphere"] = sphere;
          out["b"] = params.spec.b;
          out["B"] = params.spec.B;
        }
      },
      symbol.params());
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

Json martingale_to_json(const martingale::PaleyWalshMartingale& f,
                        const martingale::TransformSequence& v) {
  Json out;
  out["N"] = f.depth();
  out["d"] = f.levels();
  if (v.is_deterministic()) {
    out["v"] = v.alpha();
  } else {
    Json levels = Json::array();
    for (int n = 1; n <= v.depth(); ++n) {
      Json level = Json::array();
      for (std::size_t h = 0; h < (std::size_t{1} << (n - 1)); ++h) level.push_back(v.at(n, h));
      levels.push_back(level);
    }
    out["v"] = levels;
  }
  return out;
}

Json certificate_to_json(const witness::WitnessCertificate& certificate) {
  Json out;
  out["symbol"] = symbol_to_json(certificate.symbol);
  out["p"] = certificate.p;
  out["N"] = certificate.depth;
  out["budget"] = certificate.budget;
  out["seed"] = certificate.seed;
  out["frame"] = certificate.axes.frame;
  out["b"] = certificate.axes.b;
  out["B"] = certificate.axes.B;
  out["eigen_deviations"] = certificate.eigen_deviations;
  out["lower_bound"] = certificate.lower_bound;
  out["martingale"] = martingale_to_json(certificate.f, certificate.v);
  return out;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.15g", value);
  return buffer;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace sharpmult::io
