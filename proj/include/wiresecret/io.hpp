#pragma once

// JSON readers for the library input types plus a small RFC-4180 CSV writer
// with atomic file replacement. Doubles print as %.17g, which round-trips
// exactly, so equal inputs reproduce output files byte for byte.

#include <json.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wiresecret/access_structure.hpp"
#include "wiresecret/binning.hpp"
#include "wiresecret/channels.hpp"
#include "wiresecret/common.hpp"
#include "wiresecret/miso.hpp"
#include "wiresecret/region.hpp"

namespace wiresecret {

inline constexpr const char* kToolName = "wiresecret";
inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key, const char* what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string(what) + " is missing field \"" + key + "\"");
  return *it;
}

inline double json_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline Eigen::VectorXd json_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + " must be a nonempty array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = json_number(j[i], what);
  return v;
}

inline Eigen::MatrixXd json_matrix(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + " must be a nonempty array of rows");
  if (!j[0].is_array() || j[0].empty())
    throw ValidationError(std::string(what) + " rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ValidationError(std::string(what) + " rows have inconsistent lengths");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = json_number(j[r][c], what);
  }
  return m;
}

inline std::uint64_t json_seed(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ValidationError(std::string(what) + " must be a nonnegative integer");
  if (j.is_number_integer() && j.get<std::int64_t>() < 0)
    throw ValidationError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline std::vector<double> json_double_list(const nlohmann::json& j, const char* what) {
  const Eigen::VectorXd v = json_vector(j, what);
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace detail

inline nlohmann::json parse_json_text(const std::string& text, const char* what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError(std::string(what) + " is not valid JSON");
  return j;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ChannelSpec {
  enum class Kind { dmc, siso, mimo };
  Kind kind = Kind::dmc;
  DmcBroadcast dmc;
  GaussianSisoBroadcast siso;
  GaussianMimoBroadcast mimo;

  int receiver_count() const {
    switch (kind) {
      case Kind::dmc: return dmc.receiver_count();
      case Kind::siso: return static_cast<int>(siso.noise_variances.size());
      case Kind::mimo: return mimo.receiver_count();
    }
    return 0;
  }
};

// {"type": "dmc", "transitions": [matrix,...]}
// {"type": "siso", "noise_variances": [...], "power": p}
// {"type": "mimo", "noise_covariances": [matrix,...], "input_cap": matrix}
inline ChannelSpec parse_channel(const nlohmann::json& j) {
  const nlohmann::json& type = detail::require_field(j, "type", "channel");
  if (!type.is_string()) throw ValidationError("channel type must be a string");
  ChannelSpec spec;
  const std::string kind = type.get<std::string>();
  if (kind == "dmc") {
    spec.kind = ChannelSpec::Kind::dmc;
    const nlohmann::json& list = detail::require_field(j, "transitions", "dmc channel");
    if (!list.is_array() || list.empty())
      throw ValidationError("dmc channel needs a nonempty array of transition matrices");
    for (const auto& entry : list)
      spec.dmc.transitions.push_back(detail::json_matrix(entry, "transition matrix"));
    check_channel(spec.dmc);
  } else if (kind == "siso") {
    spec.kind = ChannelSpec::Kind::siso;
    spec.siso.noise_variances =
        detail::json_double_list(detail::require_field(j, "noise_variances", "siso channel"), "noise variances");
    spec.siso.power = detail::json_number(detail::require_field(j, "power", "siso channel"), "power");
    check_channel(spec.siso);
  } else if (kind == "mimo") {
    spec.kind = ChannelSpec::Kind::mimo;
    const nlohmann::json& list = detail::require_field(j, "noise_covariances", "mimo channel");
    if (!list.is_array() || list.empty())
      throw ValidationError("mimo channel needs a nonempty array of noise covariances");
    for (const auto& entry : list)
      spec.mimo.noise_covariances.push_back(detail::json_matrix(entry, "noise covariance"));
    spec.mimo.input_cap = detail::json_matrix(detail::require_field(j, "input_cap", "mimo channel"), "input cap");
    check_channel(spec.mimo);
  } else {
    throw ValidationError("unknown channel type \"" + kind + "\" (expected dmc, siso, or mimo)");
  }
  return spec;
}

// {"participants": K, "qualified": [[members],...],
//  "forbidden": [[members],...] or "complement"}
inline AccessStructure parse_structure(const nlohmann::json& j) {
  AccessStructure s;
  const nlohmann::json& participants = detail::require_field(j, "participants", "structure");
  if (!participants.is_number_integer() || participants.get<std::int64_t>() < 1)
    throw ValidationError("participants must be a positive integer");
  s.participants = participants.get<int>();

  auto parse_family = [&](const nlohmann::json& list, const char* what) {
    if (!list.is_array()) throw ValidationError(std::string(what) + " must be an array of member lists");
    std::vector<SubsetMask> family;
    for (const auto& entry : list) {
      if (!entry.is_array()) throw ValidationError(std::string(what) + " entries must be member lists");
      std::vector<int> members;
      for (const auto& m : entry) {
        if (!m.is_number_integer()) throw ValidationError(std::string(what) + " members must be integers");
        members.push_back(m.get<int>());
      }
      SubsetMask mask = mask_from_members(members);
      if (!detail::member_range_ok(mask, s.participants))
        throw ValidationError(std::string(what) + " has an empty entry or references participants beyond the declared count");
      family.push_back(mask);
    }
    return family;
  };

  s.qualified = parse_family(detail::require_field(j, "qualified", "structure"), "qualified family");
  const nlohmann::json& forbidden = detail::require_field(j, "forbidden", "structure");
  if (forbidden.is_string() && forbidden.get<std::string>() == "complement") {
    s.forbidden = complement_forbidden(minimal_qualified(s.qualified), s.participants);
  } else {
    s.forbidden = parse_family(forbidden, "forbidden family");
  }
  return s;
}

// {"first": [...], "factors": [matrix,...]}
inline MarkovChain parse_chain(const nlohmann::json& j) {
  MarkovChain chain;
  chain.first = detail::json_vector(detail::require_field(j, "first", "chain"), "chain root law");
  if (j.contains("factors")) {
    const nlohmann::json& list = j.at("factors");
    if (!list.is_array()) throw ValidationError("chain factors must be an array of matrices");
    for (const auto& entry : list) chain.factors.push_back(detail::json_matrix(entry, "chain factor"));
  }
  check_chain(chain);
  return chain;
}

// {"cap": matrix, "layers": [matrix,...]}
inline CovarianceChain parse_covariance_chain(const nlohmann::json& j) {
  CovarianceChain chain;
  chain.cap = detail::json_matrix(detail::require_field(j, "cap", "covariance chain"), "covariance cap");
  if (j.contains("layers")) {
    const nlohmann::json& list = j.at("layers");
    if (!list.is_array()) throw ValidationError("covariance layers must be an array of matrices");
    for (const auto& entry : list) chain.layers.push_back(detail::json_matrix(entry, "covariance layer"));
  }
  return chain;
}

// {"channel": matrix, "noise": matrix, "input_cap": matrix,
//  "boost_variances": [...] (optional)}
inline MisoSharingInstance parse_miso_instance(const nlohmann::json& j) {
  MisoSharingInstance inst;
  inst.channel = detail::json_matrix(detail::require_field(j, "channel", "instance"), "channel matrix");
  inst.noise = detail::json_matrix(detail::require_field(j, "noise", "instance"), "noise covariance");
  inst.input_cap = detail::json_matrix(detail::require_field(j, "input_cap", "instance"), "input cap");
  if (j.contains("boost_variances"))
    inst.boost_variances = detail::json_double_list(j.at("boost_variances"), "boost variances");
  check_instance(inst);
  return inst;
}

// {"chain": chain, "channel": dmc channel, "message_rates": [...],
//  "codebook_rates": [...], "block_length": n (optional), "seed": s (optional)}
inline BinningConfig parse_sim_config(const nlohmann::json& j) {
  BinningConfig cfg;
  cfg.chain = parse_chain(detail::require_field(j, "chain", "simulation config"));
  const ChannelSpec spec = parse_channel(detail::require_field(j, "channel", "simulation config"));
  if (spec.kind != ChannelSpec::Kind::dmc)
    throw ValidationError("simulation config needs a dmc channel");
  cfg.channel = spec.dmc;
  cfg.message_rates =
      detail::json_double_list(detail::require_field(j, "message_rates", "simulation config"), "message rates");
  cfg.codebook_rates =
      detail::json_double_list(detail::require_field(j, "codebook_rates", "simulation config"), "codebook rates");
  if (j.contains("block_length")) {
    if (!j.at("block_length").is_number_integer() || j.at("block_length").get<std::int64_t>() < 1)
      throw ValidationError("block_length must be a positive integer");
    cfg.block_length = j.at("block_length").get<int>();
  }
  if (j.contains("seed")) cfg.seed = detail::json_seed(j.at("seed"), "seed");
  return cfg;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// "# wiresecret 0.1.0 seed=<seed or none> config_hash=<fnv-1a of the inputs>"
inline std::string csv_comment(const std::string& seed_text, std::uint64_t config_hash) {
  return std::string("# ") + kToolName + " " + kToolVersion + " seed=" + seed_text +
         " config_hash=" + format_hash(config_hash);
}

// RFC-4180 rows with LF line ends, preceded by one comment line. Fields are
// quoted only when they contain a comma, a quote, or a line break.
class CsvBuilder {
 public:
  CsvBuilder(const std::vector<std::string>& header, const std::string& comment) : columns_(header.size()) {
    if (header.empty()) throw ValidationError("csv needs at least one column");
    out_ = comment + "\n";
    append_row(header);
  }

  void add_row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw ValidationError("csv row has the wrong number of fields");
    append_row(fields);
  }

  const std::string& text() const { return out_; }

 private:
  static std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }

  void append_row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ += ',';
      out_ += escape(fields[i]);
    }
    out_ += '\n';
  }

  std::size_t columns_;
  std::string out_;
};

// Writes through a temporary file in the same directory and renames it over
// the target, so readers never observe a half-written file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw ValidationError("failed while writing " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ValidationError("cannot replace " + path);
  }
}

}  // namespace wiresecret
