#pragma once

#include <json.hpp>

#include <istream>
#include <ostream>
#include <string>

#include "tariffsched/instance.hpp"
#include "tariffsched/rational.hpp"

namespace tariffsched {

using OrderedJson = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(std::vector<std::string> v)
      : std::runtime_error(join(v)), violations(std::move(v)) {}
  std::vector<std::string> violations;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "instance validation failed:";
    for (const auto& m : v) s += "\n  - " + m;
    return s;
  }
};

namespace detail {

inline Rational rational_field(const nlohmann::json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_string()) {
    try {
      return rat_from_string(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected integer or rational string");
}

inline Cost cost_field(const nlohmann::json& v, const std::string& where) {
  if (v.is_string() && v.get<std::string>() == "inf") return Cost::infinite();
  return Cost(rational_field(v, where));
}

inline std::int64_t int_field(const nlohmann::json& obj, const std::string& key,
                              const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing field \"" + key + "\"");
  if (!obj[key].is_number_integer())
    throw ParseError(where + ": field \"" + key + "\" must be an integer");
  return obj[key].get<std::int64_t>();
}

}  // namespace detail

// Parses the documented instance document. Runs validate() and throws
// ValidationError listing every violation when the instance is invalid.
inline Instance read_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: top-level value must be an object");
  if (!doc.contains("tariff")) throw ParseError("instance: missing field \"tariff\"");
  if (!doc.contains("jobs")) throw ParseError("instance: missing field \"jobs\"");

  Instance inst;
  inst.machines = doc.contains("machines")
                      ? static_cast<int>(detail::int_field(doc, "machines", "instance"))
                      : 1;

  if (!doc["tariff"].is_array()) throw ParseError("tariff: must be an array");
  for (std::size_t k = 0; k < doc["tariff"].size(); ++k) {
    const auto& iv = doc["tariff"][k];
    const std::string where = "tariff[" + std::to_string(k) + "]";
    if (!iv.is_object()) throw ParseError(where + ": must be an object");
    TariffInterval out;
    out.start = detail::int_field(iv, "start", where);
    out.end = detail::int_field(iv, "end", where);
    if (!iv.contains("cost")) throw ParseError(where + ": missing field \"cost\"");
    out.cost = detail::cost_field(iv["cost"], where + ".cost");
    inst.tariff.intervals.push_back(out);
  }

  if (!doc["jobs"].is_array()) throw ParseError("jobs: must be an array");
  for (std::size_t i = 0; i < doc["jobs"].size(); ++i) {
    const auto& jv = doc["jobs"][i];
    const std::string where = "jobs[" + std::to_string(i) + "]";
    if (!jv.is_object()) throw ParseError(where + ": must be an object");
    Job job;
    job.id = static_cast<int>(detail::int_field(jv, "id", where));
    job.p = detail::int_field(jv, "p", where);
    job.w = jv.contains("w") ? detail::rational_field(jv["w"], where + ".w") : Rational(0);
    if (jv.contains("p_per_machine")) {
      if (!jv["p_per_machine"].is_array())
        throw ParseError(where + ".p_per_machine: must be an array");
      std::vector<std::int64_t> times;
      for (const auto& pv : jv["p_per_machine"]) {
        if (pv.is_string() && pv.get<std::string>() == "inf")
          times.push_back(kInfiniteTime);
        else if (pv.is_number_integer())
          times.push_back(pv.get<std::int64_t>());
        else
          throw ParseError(where + ".p_per_machine: entries must be integers or \"inf\"");
      }
      job.p_per_machine = std::move(times);
    }
    inst.jobs.push_back(std::move(job));
  }

  auto violations = validate(inst);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return inst;
}

inline Instance read_instance(std::istream& in) {
  return read_instance(std::string(std::istreambuf_iterator<char>(in), {}));
}

// Canonical serialization: fixed field order, rationals as strings.
inline std::string write_instance(const Instance& inst) {
  OrderedJson doc;
  doc["machines"] = inst.machines;
  doc["jobs"] = OrderedJson::array();
  for (const auto& j : inst.jobs) {
    OrderedJson jv;
    jv["id"] = j.id;
    jv["p"] = j.p;
    jv["w"] = rat_to_string(j.w);
    if (j.p_per_machine) {
      OrderedJson arr = OrderedJson::array();
      for (auto p : *j.p_per_machine) {
        if (p == kInfiniteTime)
          arr.push_back("inf");
        else
          arr.push_back(p);
      }
      jv["p_per_machine"] = std::move(arr);
    }
    doc["jobs"].push_back(std::move(jv));
  }
  doc["tariff"] = OrderedJson::array();
  for (const auto& iv : inst.tariff.intervals) {
    OrderedJson t;
    t["start"] = iv.start;
    t["end"] = iv.end;
    if (iv.cost.is_infinite())
      t["cost"] = "inf";
    else
      t["cost"] = rat_to_string(iv.cost.value());
    doc["tariff"].push_back(std::move(t));
  }
  return doc.dump();
}

inline std::string write_schedule(const Schedule& sched) {
  OrderedJson doc;
  doc["objective"] = sched.objective;
  doc["total_cost"] = rat_to_string(sched.total_cost);
  doc["scheduling_cost"] = rat_to_string(sched.scheduling_cost);
  doc["tariff_cost"] = rat_to_string(sched.tariff_cost);
  doc["profile"] = sched.profile.counts;
  OrderedJson ct = OrderedJson::object();
  for (const auto& [job, c] : sched.completion_times) ct[std::to_string(job)] = rat_to_string(c);
  doc["completion_times"] = std::move(ct);
  doc["segments"] = OrderedJson::array();
  for (const auto& s : sched.segments) {
    OrderedJson seg;
    seg["job"] = s.job;
    seg["machine"] = s.machine;
    seg["start"] = rat_to_string(s.start);
    seg["end"] = rat_to_string(s.end);
    doc["segments"].push_back(std::move(seg));
  }
  return doc.dump();
}

inline std::string instance_digest(const Instance& inst) {
  // FNV-1a over the canonical serialization.
  const std::string s = write_instance(inst);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace tariffsched
