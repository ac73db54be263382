#include "plate/config.hpp"

#include "plate/errors.hpp"
#include "plate/manufactured.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace plate {

const char* to_string(StudyKind k) noexcept {
  switch (k) {
    case StudyKind::Uniform: return "uniform";
    case StudyKind::Adaptive: return "adaptive";
    case StudyKind::Verify: return "verify";
  }
  return "?";
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

class Parser {
public:
  Parser(int line, std::string section, std::string key)
      : line_(line), section_(std::move(section)), key_(std::move(key)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": [" + section_ + "] " + key_ + ": " + what);
  }

  double number(const std::string& text) const {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) fail("expected a number, got '" + t + "'");
    return v;
  }

  int integer(const std::string& text) const {
    const double v = number(text);
    if (v != static_cast<double>(static_cast<int>(v))) fail("expected an integer");
    return static_cast<int>(v);
  }

  std::vector<double> list(const std::string& text, std::size_t n) const {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
    if (out.size() != n) fail("expected " + std::to_string(n) + " comma-separated numbers");
    return out;
  }

  bool boolean(const std::string& text) const {
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    fail("expected a boolean");
  }

private:
  int line_;
  std::string section_, key_;
};

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      if (section != "mesh" && section != "scheme" && section != "source" && section != "study")
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside of a section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const Parser p(line, section, key);
    auto unknown = [&] { p.fail("unknown key"); };

    try {
      if (section == "mesh") {
        if (key == "domain") {
          if (value != "square" && value != "lshape" && value.rfind("file:", 0) != 0)
            p.fail("expected square, lshape or file:<path>");
          cfg.domain = value;
        } else if (key == "refine") {
          cfg.initial_refinements = p.integer(value);
          if (cfg.initial_refinements < 0) p.fail("must be >= 0");
        } else {
          unknown();
        }
      } else if (section == "scheme") {
        if (key == "name") cfg.scheme.scheme = parse_scheme(value);
        else if (key == "theta") cfg.scheme.theta = p.number(value);
        else if (key == "sigma1") cfg.scheme.sigma1 = p.number(value);
        else if (key == "sigma2") cfg.scheme.sigma2 = p.number(value);
        else if (key == "sigma_ip") cfg.scheme.sigma_ip = p.number(value);
        else if (key == "smoother") cfg.scheme.smoother = parse_smoother(value);
        else unknown();
      } else if (section == "source") {
        SourceConfig& s = cfg.source;
        if (key == "id") {
          if (value != "manufactured" && value != "zero" && value != "unit" && value != "center_point" &&
              value != "general")
            p.fail("expected manufactured, zero, unit, center_point or general");
          s.id = value;
        } else if (key == "f0") {
          s.f0 = p.number(value);
          s.has_f0 = true;
        } else if (key == "f1") {
          const auto v = p.list(value, 2);
          s.f1 = {v[0], v[1]};
          s.has_f1 = true;
        } else if (key == "f2") {
          const auto v = p.list(value, 3);
          s.f2 = {v[0], v[1], v[2]};
          s.has_f2 = true;
        } else if (key == "point") {
          const auto v = p.list(value, 3);
          s.points.push_back({Point(v[0], v[1]), v[2]});
        } else if (key == "line0" || key == "line1") {
          const auto v = p.list(value, 5);
          const double g = v[4];
          s.lines.push_back({Point(v[0], v[1]), Point(v[2], v[3]), key == "line0" ? 0 : 1,
                             [g](const Point&) { return g; }});
        } else {
          unknown();
        }
      } else {
        if (key == "kind") {
          if (value == "uniform") cfg.kind = StudyKind::Uniform;
          else if (value == "adaptive") cfg.kind = StudyKind::Adaptive;
          else if (value == "verify") cfg.kind = StudyKind::Verify;
          else p.fail("expected uniform, adaptive or verify");
        } else if (key == "levels") {
          cfg.levels = p.integer(value);
          if (cfg.levels < 1) p.fail("must be >= 1");
        } else if (key == "max_dofs") {
          cfg.max_dofs = p.integer(value);
        } else if (key == "theta") {
          cfg.theta = p.number(value);
          if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) p.fail("must lie in (0, 1]");
        } else if (key == "degree") {
          const int k = p.integer(value);
          if (k < -1 || k > 4) p.fail("must lie in [-1, 4]");
          cfg.degrees = {k, k, k, k, k};
        } else if (key == "output") {
          cfg.output = value;
        } else if (key == "svg") {
          cfg.svg = p.boolean(value);
        } else if (key == "seed") {
          cfg.seed = static_cast<std::uint64_t>(p.integer(value));
        } else {
          unknown();
        }
      }
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      p.fail(msg);
    }
  }
  try {
    cfg.scheme.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[scheme]: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::shared_ptr<const Mesh> make_mesh(const RunConfig& cfg) {
  Mesh m = [&] {
    if (cfg.domain == "square") return unit_square_mesh(2);
    if (cfg.domain == "lshape") return lshape_mesh();
    const std::string path = cfg.domain.substr(5);
    std::ifstream probe(path);
    if (!probe) throw ConfigError("mesh file '" + path + "' does not exist");
    return read_mesh(path);
  }();
  return std::make_shared<const Mesh>(refine_uniform(m, cfg.initial_refinements));
}

SourceSpec make_source(const SourceConfig& s) {
  SourceSpec out;
  if (s.id == "manufactured") return manufactured_square().source();
  if (s.id == "zero") return out;
  if (s.id == "unit") {
    out.f0 = [](const Point&) { return 1.0; };
    return out;
  }
  if (s.id == "center_point") {
    out.points.push_back({Point(0.5, 0.5), 1.0});
    return out;
  }
  if (s.has_f0) out.f0 = [v = s.f0](const Point&) { return v; };
  if (s.has_f1) out.f1 = [v = s.f1](const Point&) { return v; };
  if (s.has_f2) {
    Eigen::Matrix2d m;
    m << s.f2[0], s.f2[1], s.f2[1], s.f2[2];
    out.f2 = [m](const Point&) { return m; };
  }
  out.points = s.points;
  out.lines = s.lines;
  return out;
}

}  // namespace plate
