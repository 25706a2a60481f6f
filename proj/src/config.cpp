#include "tddsched/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tddsched {

namespace {

using nlohmann::json;

// Walks one JSON object, tracking which keys were read so leftovers can be
// reported and absent ones recorded as defaults.
class Section {
 public:
  Section(const json& node, std::string prefix, std::vector<std::string>& defaults)
      : node_(node), prefix_(std::move(prefix)), defaults_(defaults) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end()) {
      defaults_.push_back(name(key));
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ConfigError(name(key) + ": wrong type");
    }
  }

  void section(const char* key, const std::function<void(Section&)>& body) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it == node_.end()) {
      const json empty = json::object();
      Section sub(empty, name(key), defaults_);
      body(sub);
      return;
    }
    Section sub(*it, name(key), defaults_);
    body(sub);
    sub.reject_unknown();
  }

  void mark_default(const char* key) {
    seen_.insert(key);
    if (!node_.contains(key)) defaults_.push_back(name(key));
  }

  bool has(const char* key) const { return node_.contains(key); }
  const json& raw(const char* key) {
    seen_.insert(key);
    return node_.at(key);
  }

  void reject_unknown() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(name(it.key().c_str()) + ": unknown key");
    }
  }

  std::string name(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  std::string where() const { return prefix_.empty() ? "config" : prefix_; }

  const json& node_;
  std::string prefix_;
  std::vector<std::string>& defaults_;
  std::set<std::string> seen_;
};

ChannelModel parse_model(const std::string& v, const std::string& key) {
  if (v == "constant") return ChannelModel::Constant;
  if (v == "lognormal-block") return ChannelModel::LognormalBlock;
  throw ConfigError(key + ": expected \"constant\" or \"lognormal-block\", got \"" + v + "\"");
}

std::string model_name(ChannelModel m) {
  return m == ChannelModel::Constant ? "constant" : "lognormal-block";
}

std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> s(20);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i + 1;
  return s;
}

}  // namespace

ParsedConfig parse_config_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  ParsedConfig out;
  SimConfig& c = out.config;
  c.seeds = default_seeds();
  Section top(root, "", out.defaults_applied);

  top.section("traffic", [&](Section& t) {
    t.read("n_mbb", c.traffic.n_mbb);
    t.read("n_mcc", c.traffic.n_mcc);
    t.read("mcc_packet_bits", c.traffic.mcc_packet_bits);
    t.read("eta", c.traffic.eta);
    t.read("mcc_latency_budget", c.traffic.mcc_latency_budget);
    t.read("mbb_chunk_bits", c.traffic.mbb_chunk_bits);
    t.read("mbb_latency_budget", c.traffic.mbb_latency_budget);
    t.section("weights", [&](Section& w) {
      w.read("alpha_mbb", c.traffic.mbb_weights.alpha);
      w.read("beta_mbb", c.traffic.mbb_weights.beta);
      w.read("alpha_mcc", c.traffic.mcc_weights.alpha);
      w.read("beta_mcc", c.traffic.mcc_weights.beta);
    });
  });

  top.section("channel", [&](Section& ch) {
    ch.read("bandwidth", c.channel.bandwidth);
    std::string model = model_name(c.channel.model);
    ch.read("model", model);
    c.channel.model = parse_model(model, ch.name("model"));
    if (ch.has("mean_sinr_db")) {
      const json& v = ch.raw("mean_sinr_db");
      try {
        c.channel.mean_sinr_db =
            v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      } catch (const json::exception&) {
        throw ConfigError(ch.name("mean_sinr_db") + ": wrong type");
      }
    } else {
      ch.read("mean_sinr_db", c.channel.mean_sinr_db);
    }
    ch.read("shadow_std_db", c.channel.shadow_std_db);
    ch.read("coherence_ttis", c.channel.coherence_ttis);
  });

  top.read("tti_set", c.tti_set);
  if (top.has("fixed_tti") && !root.at("fixed_tti").is_null()) {
    double f = 0.0;
    top.read("fixed_tti", f);
    c.fixed_tti = f;
  } else {
    top.mark_default("fixed_tti");
  }
  top.read("tau", c.tau);
  top.read("c_min", c.c_min);
  top.read("rate_unit", c.rate_unit);
  top.section("solver", [&](Section& s) {
    s.read("step", c.solver.step);
    s.read("max_iters", c.solver.max_iters);
    s.read("grid_points", c.solver.grid_points);
    s.read("tol_slack", c.solver.tol_slack);
    s.read("tol_feas", c.solver.tol_feas);
  });
  top.read("horizon", c.horizon);
  top.read("warmup_fraction", c.warmup_fraction);
  top.read("seeds", c.seeds);
  top.section("output", [&](Section& o) {
    o.read("path", c.output_path);
    o.read("format", c.output_format);
  });
  top.reject_unknown();

  if (c.output_format != "csv" && c.output_format != "json") {
    throw ConfigError("output.format: expected \"csv\" or \"json\"");
  }
  if (c.seeds.empty()) throw ConfigError("seeds: must not be empty");
  c.validate();
  return out;
}

ParsedConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config(const SimConfig& c) {
  json j;
  j["traffic"] = {
      {"n_mbb", c.traffic.n_mbb},
      {"n_mcc", c.traffic.n_mcc},
      {"mcc_packet_bits", c.traffic.mcc_packet_bits},
      {"eta", c.traffic.eta},
      {"mcc_latency_budget", c.traffic.mcc_latency_budget},
      {"mbb_chunk_bits", c.traffic.mbb_chunk_bits},
      {"mbb_latency_budget", c.traffic.mbb_latency_budget},
      {"weights",
       {{"alpha_mbb", c.traffic.mbb_weights.alpha},
        {"beta_mbb", c.traffic.mbb_weights.beta},
        {"alpha_mcc", c.traffic.mcc_weights.alpha},
        {"beta_mcc", c.traffic.mcc_weights.beta}}},
  };
  j["channel"] = {
      {"bandwidth", c.channel.bandwidth},
      {"model", model_name(c.channel.model)},
      {"mean_sinr_db", c.channel.mean_sinr_db},
      {"shadow_std_db", c.channel.shadow_std_db},
      {"coherence_ttis", c.channel.coherence_ttis},
  };
  j["tti_set"] = c.tti_set;
  j["fixed_tti"] = c.fixed_tti ? json(*c.fixed_tti) : json(nullptr);
  j["tau"] = c.tau;
  j["c_min"] = c.c_min;
  j["rate_unit"] = c.rate_unit;
  j["solver"] = {{"step", c.solver.step},
                 {"max_iters", c.solver.max_iters},
                 {"grid_points", c.solver.grid_points},
                 {"tol_slack", c.solver.tol_slack},
                 {"tol_feas", c.solver.tol_feas}};
  j["horizon"] = c.horizon;
  j["warmup_fraction"] = c.warmup_fraction;
  j["seeds"] = c.seeds;
  return j.dump();
}

std::string config_hash(const SimConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tddsched
