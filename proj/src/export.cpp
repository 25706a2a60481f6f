#include "tddsched/export.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "tddsched/rate.hpp"

namespace tddsched {

namespace {

using nlohmann::json;

const char* kind_name(RowKind k) { return k == RowKind::Seed ? "seed" : "aggregate"; }

RowKind parse_kind(std::string_view s) {
  if (s == "seed") return RowKind::Seed;
  if (s == "aggregate") return RowKind::Aggregate;
  throw ValidationError("results: unknown row kind \"" + std::string(s) + "\"");
}

double parse_double(std::string_view s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("results: bad number \"" + std::string(s) + "\"");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void check_format(std::string_view format) {
  if (format != "csv" && format != "json") {
    throw ConfigError("output format must be csv or json, got \"" + std::string(format) + "\"");
  }
}

void check_table(const ResultTable& t) {
  if (t.rows.empty()) throw ValidationError("refusing to export an empty result table");
  for (const auto& r : t.rows) {
    if (r.values.size() != t.columns.size() ||
        (r.kind == RowKind::Aggregate && r.stdev.size() != t.columns.size())) {
      throw ValidationError("result row does not match the column list");
    }
  }
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_json(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string table_to_csv(const ResultTable& t) {
  check_table(t);
  std::string s;
  s += "# tddsched results\n";
  s += "# schema_version: " + std::to_string(kSchemaVersion) + "\n";
  s += "# config_hash: " + t.config_hash + "\n";
  s += "# sweep_param: " + t.sweep_param + "\n";
  s += "# units: throughput bit/s, delays s, fractions and shares in [0,1], latency_budget s, fixed_tti s (0 = scalable)\n";
  s += "# aggregate rows: mean over seeds, *_stdev columns hold the sample standard deviation\n";
  s += "param_value,row,seed";
  for (const auto& c : t.columns) s += "," + c;
  for (const auto& c : t.columns) s += "," + c + "_stdev";
  s += "\n";
  for (const auto& r : t.rows) {
    s += format_double(r.param_value);
    s += ",";
    s += kind_name(r.kind);
    s += ",";
    if (r.seed) s += std::to_string(*r.seed);
    for (double v : r.values) s += "," + format_double(v);
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      s += ",";
      if (r.kind == RowKind::Aggregate) s += format_double(r.stdev[i]);
    }
    s += "\n";
  }
  return s;
}

std::string table_to_json(const ResultTable& t) {
  check_table(t);
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["param_value"] = r.param_value;
    row["row"] = kind_name(r.kind);
    row["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    json values = json::array();
    for (double v : r.values) values.push_back(number(v));
    row["values"] = values;
    if (r.kind == RowKind::Aggregate) {
      json sd = json::array();
      for (double v : r.stdev) sd.push_back(number(v));
      row["stdev"] = sd;
    }
    rows.push_back(row);
  }
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = t.config_hash;
  j["sweep_param"] = t.sweep_param;
  j["columns"] = t.columns;
  j["rows"] = rows;
  return j.dump(1) + "\n";
}

void write_table(const ResultTable& table, std::string_view format, const std::filesystem::path& path) {
  check_format(format);
  write_file(path, format == "csv" ? table_to_csv(table) : table_to_json(table));
}

ResultTable parse_table(std::string_view text) {
  ResultTable t;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      const json j = json::parse(text);
      if (j.at("schema_version").get<int>() != kSchemaVersion) {
        throw ValidationError("results: unsupported schema_version");
      }
      t.config_hash = j.at("config_hash").get<std::string>();
      t.sweep_param = j.at("sweep_param").get<std::string>();
      t.columns = j.at("columns").get<std::vector<std::string>>();
      for (const auto& jr : j.at("rows")) {
        ResultRow r;
        r.param_value = jr.at("param_value").get<double>();
        r.kind = parse_kind(jr.at("row").get<std::string>());
        if (!jr.at("seed").is_null()) r.seed = jr.at("seed").get<std::uint64_t>();
        for (const auto& v : jr.at("values")) r.values.push_back(from_json(v));
        if (jr.contains("stdev")) {
          for (const auto& v : jr.at("stdev")) r.stdev.push_back(from_json(v));
        }
        t.rows.push_back(std::move(r));
      }
    } catch (const json::exception& e) {
      throw ValidationError(std::string("results: malformed JSON: ") + e.what());
    }
    return t;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::size_t ncols = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string_view l(line);
      if (l.starts_with("# config_hash: ")) t.config_hash = std::string(l.substr(15));
      if (l.starts_with("# sweep_param: ")) t.sweep_param = std::string(l.substr(15));
      continue;
    }
    const auto cells = split(line, ',');
    if (!header) {
      if (cells.size() < 3 || (cells.size() - 3) % 2 != 0) throw ValidationError("results: bad header");
      ncols = (cells.size() - 3) / 2;
      for (std::size_t i = 0; i < ncols; ++i) t.columns.emplace_back(cells[3 + i]);
      header = true;
      continue;
    }
    if (cells.size() != 3 + 2 * ncols) throw ValidationError("results: row has wrong cell count");
    ResultRow r;
    r.param_value = parse_double(cells[0]);
    r.kind = parse_kind(cells[1]);
    if (!cells[2].empty()) {
      std::uint64_t seed = 0;
      std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), seed);
      r.seed = seed;
    }
    for (std::size_t i = 0; i < ncols; ++i) r.values.push_back(parse_double(cells[3 + i]));
    if (r.kind == RowKind::Aggregate) {
      for (std::size_t i = 0; i < ncols; ++i) r.stdev.push_back(parse_double(cells[3 + ncols + i]));
    }
    t.rows.push_back(std::move(r));
  }
  if (!header) throw ValidationError("results: missing header line");
  return t;
}

ResultTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

std::string cdf_to_csv(const CdfPoints& cdf, std::string_view config_hash) {
  if (cdf.empty()) throw ValidationError("refusing to export an empty CDF");
  std::string s = "# MCC packet delay CDF\n# config_hash: " + std::string(config_hash) + "\n";
  s += "# units: delay_s in seconds\ndelay_s,cdf\n";
  for (const auto& [d, f] : cdf) s += format_double(d) + "," + format_double(f) + "\n";
  return s;
}

std::string cdf_to_json(const CdfPoints& cdf, std::string_view config_hash) {
  if (cdf.empty()) throw ValidationError("refusing to export an empty CDF");
  json rows = json::array();
  for (const auto& [d, f] : cdf) rows.push_back({d, f});
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = config_hash;
  j["columns"] = {"delay_s", "cdf"};
  j["rows"] = rows;
  return j.dump(1) + "\n";
}

void write_cdf(const CdfPoints& cdf, std::string_view config_hash, std::string_view format,
               const std::filesystem::path& path) {
  check_format(format);
  write_file(path, format == "csv" ? cdf_to_csv(cdf, config_hash) : cdf_to_json(cdf, config_hash));
}

TraceWriter::TraceWriter(const std::filesystem::path& path, std::string_view config_hash, double tau,
                         double bandwidth)
    : out_(path, std::ios::binary), tau_(tau), bandwidth_(bandwidth) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_ << "# per-TTI trace\n# config_hash: " << config_hash << "\n";
  out_ << "# units: start_s and length_s in seconds, bits per class in this TTI; allocation is id:fraction\n";
  out_ << "tti,start_s,length_s,mode,idle,utility,mbb_bits,mcc_bits,allocation\n";
}

void TraceWriter::operator()(const TtiClock& clock, const TtiDecision& d, std::span<const Service> services,
                             std::span<const double> sinr) {
  double mbb = 0.0;
  double mcc = 0.0;
  std::string alloc;
  const RateContext ctx{bandwidth_};
  const OverheadModel overhead{tau_};
  for (std::size_t i = 0; i < services.size(); ++i) {
    const double p = d.idle ? 0.0 : d.allocation[i];
    if (p <= 0.0) continue;
    const Service& s = services[i];
    const double bits =
        std::min(s.demand, d.tti * achievable_rate(s, p, d.mode, d.tti, sinr[i], ctx, overhead));
    (s.service_class == ServiceClass::MBB ? mbb : mcc) += bits;
    if (!alloc.empty()) alloc += ';';
    alloc += std::to_string(s.id) + ":" + format_double(p);
  }
  out_ << clock.index << ',' << format_double(clock.start) << ',' << format_double(d.tti) << ','
       << to_string(d.mode) << ',' << (d.idle ? 1 : 0) << ',' << format_double(d.utility) << ','
       << format_double(mbb) << ',' << format_double(mcc) << ',' << alloc << '\n';
  if (!out_) throw IoError("trace write failed");
}

}  // namespace tddsched
