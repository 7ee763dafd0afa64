#include "dwdual/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "dwdual/error.hpp"

namespace dwdual {

using nlohmann::json;

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::Config, path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

const json& required(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) fail(join(path, key), "missing required field");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long long>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig cfg;
  reject_unknown(doc, "", {"spec", "load", "grid", "stability", "oracle", "output"});

  const auto& spec = required(doc, "", "spec");
  reject_unknown(spec, "spec", {"nu", "lambda", "R1", "R2", "n"});
  cfg.spec.nu = number(required(spec, "spec", "nu"), "spec.nu");
  cfg.spec.lambda = number(required(spec, "spec", "lambda"), "spec.lambda");
  cfg.spec.R1 = number(required(spec, "spec", "R1"), "spec.R1");
  cfg.spec.R2 = number(required(spec, "spec", "R2"), "spec.R2");
  const long long n = integer(required(spec, "spec", "n"), "spec.n");
  if (n < 1 || n > 64) fail("spec.n", "must be an integer in [1, 64]");
  cfg.spec.n = static_cast<int>(n);

  const auto& load = required(doc, "", "load");
  if (!load.is_object()) fail("load", "expected an object");
  cfg.load.type = text(required(load, "load", "type"), "load.type");
  if (cfg.load.type == "linear") {
    reject_unknown(load, "load", {"type", "amplitude"});
    cfg.load.amplitude = number(required(load, "load", "amplitude"), "load.amplitude");
  } else if (cfg.load.type == "table") {
    reject_unknown(load, "load", {"type", "points"});
    const auto& pts = required(load, "load", "points");
    if (!pts.is_array()) fail("load.points", "expected an array of [r, f] pairs");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = "load.points[" + std::to_string(i) + "]";
      if (!pts[i].is_array() || pts[i].size() != 2) fail(p, "expected [r, f]");
      cfg.load.points.push_back({number(pts[i][0], p + "[0]"), number(pts[i][1], p + "[1]")});
    }
  } else {
    fail("load.type", "expected \"linear\" or \"table\", got \"" + cfg.load.type + "\"");
  }

  if (doc.contains("grid")) {
    const auto& grid = doc.at("grid");
    reject_unknown(grid, "grid", {"nodes"});
    if (grid.contains("nodes")) {
      const long long nodes = integer(grid.at("nodes"), "grid.nodes");
      if (nodes < 3) fail("grid.nodes", "must be >= 3");
      cfg.grid_nodes = static_cast<std::size_t>(nodes);
    }
  }

  if (doc.contains("stability")) {
    const auto& st = doc.at("stability");
    reject_unknown(st, "stability", {"max_mode", "elements"});
    if (st.contains("max_mode")) {
      const long long L = integer(st.at("max_mode"), "stability.max_mode");
      if (L < 0) fail("stability.max_mode", "must be >= 0");
      cfg.max_mode = static_cast<int>(L);
    }
    if (st.contains("elements")) {
      const long long e = integer(st.at("elements"), "stability.elements");
      if (e < 2) fail("stability.elements", "must be >= 2");
      cfg.elements = static_cast<std::size_t>(e);
    }
  }
  if (cfg.spec.n >= 2 && cfg.max_mode < 1) {
    fail("stability.max_mode", "must be >= 1 when n >= 2");
  }

  if (doc.contains("oracle")) {
    const auto& oc = doc.at("oracle");
    reject_unknown(oc, "oracle", {"enabled", "starts", "seed"});
    if (oc.contains("enabled")) cfg.oracle_enabled = boolean(oc.at("enabled"), "oracle.enabled");
    if (oc.contains("starts")) {
      const long long s = integer(oc.at("starts"), "oracle.starts");
      if (s < 0) fail("oracle.starts", "must be >= 0");
      cfg.oracle_starts = static_cast<int>(s);
    }
    if (oc.contains("seed")) {
      const long long s = integer(oc.at("seed"), "oracle.seed");
      if (s < 0) fail("oracle.seed", "must be >= 0");
      cfg.oracle_seed = static_cast<std::uint64_t>(s);
    }
  }

  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    reject_unknown(out, "output", {"directory", "formats"});
    if (out.contains("directory")) cfg.output_directory = text(out.at("directory"), "output.directory");
    if (out.contains("formats")) {
      const auto& f = out.at("formats");
      if (!f.is_array()) fail("output.formats", "expected an array of strings");
      static const std::set<std::string> known = {"csv", "json", "modes", "plots"};
      cfg.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string p = "output.formats[" + std::to_string(i) + "]";
        auto name = text(f[i], p);
        if (!known.contains(name)) fail(p, "unknown format \"" + name + "\"");
        cfg.formats.push_back(std::move(name));
      }
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, path.string() + ": cannot open configuration file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json load = {{"type", c.load.type}};
  if (c.load.type == "linear") {
    load["amplitude"] = c.load.amplitude;
  } else {
    json pts = json::array();
    for (const auto& p : c.load.points) pts.push_back({p.r, p.f});
    load["points"] = pts;
  }
  return {
      {"spec", {{"nu", c.spec.nu}, {"lambda", c.spec.lambda}, {"R1", c.spec.R1}, {"R2", c.spec.R2}, {"n", c.spec.n}}},
      {"load", load},
      {"grid", {{"nodes", c.grid_nodes}}},
      {"stability", {{"max_mode", c.max_mode}, {"elements", c.elements}}},
      {"oracle", {{"enabled", c.oracle_enabled}, {"starts", c.oracle_starts}, {"seed", c.oracle_seed}}},
      {"output", {{"directory", c.output_directory}, {"formats", c.formats}}},
  };
}

LoadFunction build_load(const RunConfig& config) {
  if (config.load.type == "linear") {
    if (config.load.amplitude == 0.0) {
      throw Error(ErrorKind::Config, "load.amplitude: must be nonzero");
    }
    return balanced_linear_load(config.spec, config.load.amplitude);
  }
  try {
    return LoadFunction::tabulated(config.load.points);
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("load.points: ") + e.what());
  }
}

}  // namespace dwdual
