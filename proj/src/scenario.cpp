#include "dnf/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dnf/errors.hpp"

namespace dnf {

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
    throw ScenarioError(origin_ + ":" + std::to_string(line) + ": " + msg);
  }
  [[noreturn]] void fail_at(int line, const std::string& msg) const {
    throw ScenarioError(origin_ + ":" + std::to_string(line) + ": " + msg);
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allow_keys(const YAML::Node& node, const std::string& what, std::initializer_list<const char*> keys) const {
    require_map(node, what);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  YAML::Node required(const YAML::Node& parent, const char* key, const std::string& what) const {
    const YAML::Node child = parent[key];
    if (!child.IsDefined() || child.IsNull()) fail(parent, what + " is missing required key '" + key + "'");
    return child;
  }

  double number(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, what + " must be a number, got '" + node.Scalar() + "'");
    }
  }
  double number(const YAML::Node& parent, const char* key, const std::string& what, double fallback) const {
    const YAML::Node child = parent[key];
    if (!child.IsDefined() || child.IsNull()) return fallback;
    return number(child, what + "." + key);
  }
  double required_number(const YAML::Node& parent, const char* key, const std::string& what) const {
    return number(required(parent, key, what), what + "." + key);
  }

  long long integer(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be an integer");
    try {
      return node.as<long long>();
    } catch (const YAML::Exception&) {
      fail(node, what + " must be an integer, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a string");
    return node.Scalar();
  }

  bool boolean(const YAML::Node& parent, const char* key, const std::string& what, bool fallback) const {
    const YAML::Node child = parent[key];
    if (!child.IsDefined() || child.IsNull()) return fallback;
    try {
      return child.as<bool>();
    } catch (const YAML::Exception&) {
      fail(child, what + "." + key + " must be true or false");
    }
  }

  // Runs a validating callable, converting std::invalid_argument to a located error.
  template <typename F>
  void check(const YAML::Node& node, F&& f) const {
    try {
      f();
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string origin_;
};

KernelParams read_kernel(const Reader& r, const YAML::Node& node, const std::string& what) {
  KernelParams k;
  if (!node.IsDefined() || node.IsNull()) return k;
  r.allow_keys(node, what, {"c_excite", "sigma_excite", "c_inhibit", "sigma_inhibit", "c_global"});
  k.c_excite = r.number(node, "c_excite", what, 0.0);
  k.sigma_excite = r.number(node, "sigma_excite", what, 1.0);
  k.c_inhibit = r.number(node, "c_inhibit", what, 0.0);
  k.sigma_inhibit = r.number(node, "sigma_inhibit", what, 1.0);
  k.c_global = r.number(node, "c_global", what, 0.0);
  r.check(node, [&] { k.validate(); });
  return k;
}

SigmoidParams read_sigmoid(const Reader& r, const YAML::Node& node, const std::string& what) {
  SigmoidParams s;
  if (!node.IsDefined() || node.IsNull()) return s;
  r.allow_keys(node, what, {"beta", "alpha"});
  s.beta = r.number(node, "beta", what, s.beta);
  s.alpha = r.number(node, "alpha", what, s.alpha);
  r.check(node, [&] { s.validate(); });
  return s;
}

ScheduledInput read_input(const Reader& r, const YAML::Node& node, const std::string& what) {
  r.allow_keys(node, what, {"field", "amplitude", "center", "width", "t_on", "t_off"});
  ScheduledInput in;
  in.target_field = r.text(r.required(node, "field", what), what + ".field");
  in.bump.amplitude = r.required_number(node, "amplitude", what);
  in.bump.center = r.required_number(node, "center", what);
  in.bump.width = r.required_number(node, "width", what);
  in.t_on = r.required_number(node, "t_on", what);
  in.t_off = r.required_number(node, "t_off", what);
  r.check(node, [&] { in.validate(); });
  return in;
}

TargetMode parse_mode(const Reader& r, const YAML::Node& node) {
  const auto s = r.text(node, "oscillator.mode");
  if (s == "plateau") return TargetMode::plateau_constant;
  if (s == "time_varying") return TargetMode::time_varying;
  r.fail(node, "oscillator.mode must be 'plateau' or 'time_varying', got '" + s + "'");
}

Scenario read_document(const Reader& r, const YAML::Node& root) {
  r.allow_keys(root, "scenario", {"schema_version", "grid", "fields", "memories", "edges", "gates",
                                  "response_weights", "inputs", "trials", "oscillator", "run"});
  Scenario sc;
  ModelSpec& model = sc.model;

  const auto version_node = r.required(root, "schema_version", "scenario");
  const auto version = r.integer(version_node, "schema_version");
  if (version != kScenarioSchemaVersion) {
    r.fail(version_node, "unsupported schema_version " + std::to_string(version) + " (expected " +
                             std::to_string(kScenarioSchemaVersion) + ")");
  }

  const auto grid = r.required(root, "grid", "scenario");
  r.allow_keys(grid, "grid", {"x_min", "x_max", "n_points"});
  {
    const double x_min = r.required_number(grid, "x_min", "grid");
    const double x_max = r.required_number(grid, "x_max", "grid");
    const long long n = r.integer(r.required(grid, "n_points", "grid"), "grid.n_points");
    r.check(grid, [&] { model.grid = build_grid(x_min, x_max, n); });
  }

  const auto fields = r.required(root, "fields", "scenario");
  r.require_map(fields, "fields");
  for (const auto& kv : fields) {
    const auto id = kv.first.as<std::string>();
    const std::string what = "fields." + id;
    const YAML::Node f = kv.second;
    r.allow_keys(f, what, {"tau", "h", "q", "kernel", "sigmoid"});
    FieldSpec spec;
    spec.tau = r.required_number(f, "tau", what);
    spec.h = r.required_number(f, "h", what);
    spec.q = r.number(f, "q", what, 0.0);
    spec.kernel = read_kernel(r, f["kernel"], what + ".kernel");
    spec.sigmoid = read_sigmoid(r, f["sigmoid"], what + ".sigmoid");
    r.check(f, [&] { spec.validate(); });
    model.fields.emplace(id, spec);
  }

  std::map<std::string, int> lines;  // where each named object was declared
  for (const auto& kv : fields) lines[kv.first.as<std::string>()] = kv.first.Mark().line + 1;

  if (const auto memories = root["memories"]; memories.IsDefined() && !memories.IsNull()) {
    r.require_map(memories, "memories");
    for (const auto& kv : memories) {
      const auto id = kv.first.as<std::string>();
      const std::string what = "memories." + id;
      const YAML::Node m = kv.second;
      r.allow_keys(m, what, {"source", "tau_mem", "tau_decay", "kernel"});
      MemorySpec spec;
      spec.source = r.text(r.required(m, "source", what), what + ".source");
      spec.tau_mem = r.required_number(m, "tau_mem", what);
      spec.tau_decay = r.required_number(m, "tau_decay", what);
      spec.kernel = read_kernel(r, m["kernel"], what + ".kernel");
      r.check(m, [&] { spec.validate(); });
      if (model.fields.contains(id)) r.fail(kv.first, "memory '" + id + "' reuses a field identifier");
      if (!model.fields.contains(spec.source)) {
        r.fail(m["source"], "memory '" + id + "' references unknown source field '" + spec.source + "'");
      }
      if (!(spec.tau_mem > model.fields.at(spec.source).tau)) {
        r.fail(m, "memory '" + id + "': tau_mem must exceed the tau of source field '" + spec.source + "'");
      }
      model.memories.emplace(id, spec);
      lines[id] = kv.first.Mark().line + 1;
    }
  }

  if (const auto edges = root["edges"]; edges.IsDefined() && !edges.IsNull()) {
    if (!edges.IsSequence()) r.fail(edges, "edges must be a list");
    for (const auto& e : edges) {
      r.allow_keys(e, "edge", {"source", "target", "strength"});
      CouplingEdge edge;
      edge.source = r.text(r.required(e, "source", "edge"), "edge.source");
      edge.target = r.text(r.required(e, "target", "edge"), "edge.target");
      edge.strength = r.required_number(e, "strength", "edge");
      if (!model.is_field(edge.source) && !model.is_memory(edge.source)) {
        r.fail(e["source"], "edge source '" + edge.source + "' is not a known field or memory");
      }
      if (!model.is_field(edge.target)) r.fail(e["target"], "edge target '" + edge.target + "' is not a known field");
      model.edges.push_back(edge);
    }
  }

  if (const auto gates = root["gates"]; gates.IsDefined() && !gates.IsNull()) {
    r.allow_keys(gates, "gates", {"fields", "clamp_margin"});
    if (const auto list = gates["fields"]; list.IsDefined()) {
      if (!list.IsSequence()) r.fail(list, "gates.fields must be a list");
      for (const auto& g : list) {
        const auto id = r.text(g, "gated field");
        if (!model.is_field(id)) r.fail(g, "gated field '" + id + "' is not a known field");
        model.gated_fields.insert(id);
      }
    }
    model.clamp_margin = r.number(gates, "clamp_margin", "gates", 0.0);
  }

  if (const auto weights = root["response_weights"]; weights.IsDefined() && !weights.IsNull()) {
    r.require_map(weights, "response_weights");
    for (const auto& kv : weights) {
      const auto id = kv.first.as<std::string>();
      if (!model.is_field(id)) r.fail(kv.first, "response weight for unknown field '" + id + "'");
      model.response_weights[id] = r.number(kv.second, "response_weights." + id);
    }
  }

  r.check(root, [&] { model.validate(); });

  std::map<std::string, ScheduledInput> library;
  if (const auto inputs = root["inputs"]; inputs.IsDefined() && !inputs.IsNull()) {
    r.require_map(inputs, "inputs");
    for (const auto& kv : inputs) {
      const auto name = kv.first.as<std::string>();
      auto in = read_input(r, kv.second, "inputs." + name);
      if (!model.is_field(in.target_field)) {
        r.fail(kv.second["field"], "input '" + name + "' targets unknown field '" + in.target_field + "'");
      }
      library.emplace(name, std::move(in));
    }
  }

  if (const auto run = root["run"]; run.IsDefined() && !run.IsNull()) {
    r.allow_keys(run, "run", {"dt", "seed", "record_history", "measure_field", "convolution", "plateau_std_tol",
                              "subgrid_refinement"});
    sc.run.dt = r.number(run, "dt", "run", sc.run.dt);
    if (!(sc.run.dt > 0.0)) r.fail(run["dt"], "run.dt must be positive");
    if (const auto seed = run["seed"]; seed.IsDefined()) {
      const auto v = r.integer(seed, "run.seed");
      if (v < 0) r.fail(seed, "run.seed must be non-negative");
      sc.run.seed = static_cast<std::uint64_t>(v);
    }
    sc.run.record_history = r.boolean(run, "record_history", "run", false);
    if (const auto mf = run["measure_field"]; mf.IsDefined()) sc.run.measure_field = r.text(mf, "run.measure_field");
    if (const auto conv = run["convolution"]; conv.IsDefined()) {
      r.check(conv, [&] { sc.run.convolution = parse_convolution_method(r.text(conv, "run.convolution")); });
    }
    sc.run.plateau_std_tol = r.number(run, "plateau_std_tol", "run", sc.run.plateau_std_tol);
    if (!(sc.run.plateau_std_tol > 0.0)) r.fail(run["plateau_std_tol"], "run.plateau_std_tol must be positive");
    sc.run.subgrid_refinement = r.boolean(run, "subgrid_refinement", "run", false);
  }
  if (!model.is_field(sc.run.measure_field)) {
    r.fail(root["run"], "measure field '" + sc.run.measure_field + "' is not a known field");
  }

  if (const auto osc = root["oscillator"]; osc.IsDefined() && !osc.IsNull()) {
    r.allow_keys(osc, "oscillator", {"k_stiffness", "mode", "x0", "dt"});
    OscillatorConfig cfg;
    cfg.params.k_stiffness = r.required_number(osc, "k_stiffness", "oscillator");
    if (const auto mode = osc["mode"]; mode.IsDefined()) cfg.mode = parse_mode(r, mode);
    cfg.x0 = r.number(osc, "x0", "oscillator", 0.0);
    cfg.dt = r.number(osc, "dt", "oscillator", cfg.dt);
    r.check(osc, [&] { cfg.validate(); });
    sc.run.oscillator = cfg;
  }

  const auto trials = r.required(root, "trials", "scenario");
  if (!trials.IsSequence() || trials.size() == 0) r.fail(trials, "trials must be a non-empty list");
  for (const auto& t : trials) {
    r.allow_keys(t, "trial", {"label", "repeat", "duration", "inputs", "measure_window"});
    TrialSpec trial;
    trial.label = r.text(r.required(t, "label", "trial"), "trial.label");
    const std::string what = "trial '" + trial.label + "'";
    trial.duration = r.required_number(t, "duration", what);
    if (const auto list = t["inputs"]; list.IsDefined() && !list.IsNull()) {
      if (!list.IsSequence()) r.fail(list, what + ": inputs must be a list");
      for (const auto& item : list) {
        if (item.IsScalar()) {
          const auto name = item.Scalar();
          auto it = library.find(name);
          if (it == library.end()) r.fail(item, what + " references unknown input '" + name + "'");
          trial.inputs.push_back(it->second);
        } else {
          auto in = read_input(r, item, what + " input");
          if (!model.is_field(in.target_field)) {
            r.fail(item, what + ": input targets unknown field '" + in.target_field + "'");
          }
          trial.inputs.push_back(std::move(in));
        }
      }
    }
    if (const auto mw = t["measure_window"]; mw.IsDefined() && !mw.IsNull()) {
      if (!mw.IsSequence() || mw.size() != 2) r.fail(mw, what + ": measure_window must be [begin, end]");
      trial.measure_window = TimeWindow{r.number(mw[0], "measure_window"), r.number(mw[1], "measure_window")};
    }
    r.check(t, [&] { trial.validate(model); });

    long long repeat = 1;
    if (const auto rep = t["repeat"]; rep.IsDefined()) {
      repeat = r.integer(rep, what + ".repeat");
      if (repeat < 1) r.fail(rep, what + ": repeat must be at least 1");
    }
    if (repeat == 1) {
      sc.schedule.push_back(std::move(trial));
    } else {
      for (long long k = 1; k <= repeat; ++k) {
        TrialSpec copy = trial;
        copy.label = trial.label + std::to_string(k);
        sc.schedule.push_back(std::move(copy));
      }
    }
  }
  return sc;
}

void emit_kernel(YAML::Emitter& out, const KernelParams& k) {
  out << YAML::Key << "kernel" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "c_excite" << YAML::Value << k.c_excite;
  out << YAML::Key << "sigma_excite" << YAML::Value << k.sigma_excite;
  out << YAML::Key << "c_inhibit" << YAML::Value << k.c_inhibit;
  out << YAML::Key << "sigma_inhibit" << YAML::Value << k.sigma_inhibit;
  out << YAML::Key << "c_global" << YAML::Value << k.c_global;
  out << YAML::EndMap;
}

void emit_input(YAML::Emitter& out, const ScheduledInput& in) {
  out << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "field" << YAML::Value << in.target_field;
  out << YAML::Key << "amplitude" << YAML::Value << in.bump.amplitude;
  out << YAML::Key << "center" << YAML::Value << in.bump.center;
  out << YAML::Key << "width" << YAML::Value << in.bump.width;
  out << YAML::Key << "t_on" << YAML::Value << in.t_on;
  out << YAML::Key << "t_off" << YAML::Value << in.t_off;
  out << YAML::EndMap;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  const Reader reader{std::string(origin)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    reader.fail_at(e.mark.line + 1, "parse error: " + e.msg);
  }
  if (!root.IsMap()) reader.fail(root, "scenario document must be a mapping");
  return read_document(reader, root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path.string() + ":0: cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string dump_scenario(const Scenario& sc) {
  YAML::Emitter out;
  out.SetDoublePrecision(std::numeric_limits<double>::max_digits10);
  const auto& m = sc.model;

  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kScenarioSchemaVersion;

  out << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "x_min" << YAML::Value << m.grid.x_min();
  out << YAML::Key << "x_max" << YAML::Value << m.grid.x_max();
  out << YAML::Key << "n_points" << YAML::Value << m.grid.size();
  out << YAML::EndMap;

  out << YAML::Key << "fields" << YAML::Value << YAML::BeginMap;
  for (const auto& [id, f] : m.fields) {
    out << YAML::Key << id << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "tau" << YAML::Value << f.tau;
    out << YAML::Key << "h" << YAML::Value << f.h;
    out << YAML::Key << "q" << YAML::Value << f.q;
    emit_kernel(out, f.kernel);
    out << YAML::Key << "sigmoid" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "beta" << YAML::Value << f.sigmoid.beta;
    out << YAML::Key << "alpha" << YAML::Value << f.sigmoid.alpha;
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  if (!m.memories.empty()) {
    out << YAML::Key << "memories" << YAML::Value << YAML::BeginMap;
    for (const auto& [id, mem] : m.memories) {
      out << YAML::Key << id << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "source" << YAML::Value << mem.source;
      out << YAML::Key << "tau_mem" << YAML::Value << mem.tau_mem;
      out << YAML::Key << "tau_decay" << YAML::Value << mem.tau_decay;
      emit_kernel(out, mem.kernel);
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }

  if (!m.edges.empty()) {
    out << YAML::Key << "edges" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : m.edges) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "source" << YAML::Value << e.source;
      out << YAML::Key << "target" << YAML::Value << e.target;
      out << YAML::Key << "strength" << YAML::Value << e.strength;
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  out << YAML::Key << "gates" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "fields" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& g : m.gated_fields) out << g;
  out << YAML::EndSeq;
  out << YAML::Key << "clamp_margin" << YAML::Value << m.clamp_margin;
  out << YAML::EndMap;

  if (!m.response_weights.empty()) {
    out << YAML::Key << "response_weights" << YAML::Value << YAML::BeginMap;
    for (const auto& [id, w] : m.response_weights) out << YAML::Key << id << YAML::Value << w;
    out << YAML::EndMap;
  }

  out << YAML::Key << "trials" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : sc.schedule) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << YAML::DoubleQuoted << t.label;
    out << YAML::Key << "duration" << YAML::Value << t.duration;
    out << YAML::Key << "inputs" << YAML::Value << YAML::BeginSeq;
    for (const auto& in : t.inputs) emit_input(out, in);
    out << YAML::EndSeq;
    if (t.measure_window) {
      out << YAML::Key << "measure_window" << YAML::Value << YAML::Flow << YAML::BeginSeq
          << t.measure_window->begin << t.measure_window->end << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  if (sc.run.oscillator) {
    const auto& o = *sc.run.oscillator;
    out << YAML::Key << "oscillator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "k_stiffness" << YAML::Value << o.params.k_stiffness;
    out << YAML::Key << "mode" << YAML::Value
        << (o.mode == TargetMode::plateau_constant ? "plateau" : "time_varying");
    out << YAML::Key << "x0" << YAML::Value << o.x0;
    out << YAML::Key << "dt" << YAML::Value << o.dt;
    out << YAML::EndMap;
  }

  out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << sc.run.dt;
  out << YAML::Key << "seed" << YAML::Value << sc.run.seed;
  out << YAML::Key << "record_history" << YAML::Value << sc.run.record_history;
  out << YAML::Key << "measure_field" << YAML::Value << sc.run.measure_field;
  out << YAML::Key << "convolution" << YAML::Value << std::string(to_string(sc.run.convolution));
  out << YAML::Key << "plateau_std_tol" << YAML::Value << sc.run.plateau_std_tol;
  out << YAML::Key << "subgrid_refinement" << YAML::Value << sc.run.subgrid_refinement;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace dnf
