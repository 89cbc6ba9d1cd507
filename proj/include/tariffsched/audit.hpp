#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tariffsched/instance.hpp"
#include "tariffsched/makespan.hpp"
#include "tariffsched/rational.hpp"
#include "tariffsched/tariff.hpp"

namespace tariffsched {

// Structural audit of a single-machine min-sum schedule: integral preemption,
// full use of reserved slots while work remains, and at most one partially
// reserved interval portion per realized region.
inline std::vector<std::string> audit_minsum_schedule(const Instance& inst,
                                                      const Schedule& sched) {
  std::vector<std::string> out;
  const auto& tariff = inst.tariff;
  if (sched.profile.counts.size() != tariff.intervals.size()) {
    out.push_back("profile: interval count mismatch");
    return out;
  }
  Rational tariff_cost = 0;
  std::vector<std::int64_t> reserved;  // slot indices, prefix per interval
  for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
    const auto& iv = tariff.intervals[k];
    const std::int64_t c = sched.profile.counts[k];
    if (c < 0 || c > iv.end - iv.start) {
      out.push_back("profile: count out of range in interval " + std::to_string(k));
      continue;
    }
    if (c > 0 && iv.cost.is_infinite())
      out.push_back("profile: infinite-cost slots reserved in interval " + std::to_string(k));
    else if (c > 0)
      tariff_cost += iv.cost.value() * c;
    for (std::int64_t i = 0; i < c; ++i) reserved.push_back(iv.start + i);
  }
  if (tariff_cost != sched.tariff_cost) out.push_back("cost: tariff_cost mismatch");
  if (sched.total_cost != sched.scheduling_cost + sched.tariff_cost)
    out.push_back("cost: total_cost is not scheduling_cost + tariff_cost");

  const bool unit = sched.objective == "sumcj";
  Rational sched_cost = 0;
  std::map<int, Rational> seg_len;
  std::map<int, Rational> first_start;
  std::vector<std::pair<Rational, Rational>> machine_busy;
  for (const auto& s : sched.segments) {
    if (!rat_is_integer(s.start) || !rat_is_integer(s.end))
      out.push_back("integrality: fractional segment bounds for job " + std::to_string(s.job));
    if (s.start >= s.end) out.push_back("segment: empty or reversed for job " + std::to_string(s.job));
    seg_len[s.job] += s.end - s.start;
    auto it = first_start.find(s.job);
    if (it == first_start.end() || s.start < it->second) first_start[s.job] = s.start;
    machine_busy.push_back({s.start, s.end});
    // Every covered slot must be reserved.
    for (BigInt t = rat_floor(s.start); t < rat_ceil(s.end); ++t) {
      const std::int64_t ti = static_cast<std::int64_t>(t);
      if (!std::binary_search(reserved.begin(), reserved.end(), ti))
        out.push_back("segment: job " + std::to_string(s.job) + " runs in unreserved slot " +
                      std::to_string(ti));
    }
  }
  std::sort(machine_busy.begin(), machine_busy.end());
  for (std::size_t i = 1; i < machine_busy.size(); ++i)
    if (machine_busy[i].first < machine_busy[i - 1].second) {
      out.push_back("overlap: two segments share machine time");
      break;
    }

  Rational cmax = 0;
  for (const auto& j : inst.jobs) {
    auto it = sched.completion_times.find(j.id);
    if (it == sched.completion_times.end()) {
      out.push_back("completion: missing job " + std::to_string(j.id));
      continue;
    }
    cmax = std::max(cmax, it->second);
    if (seg_len[j.id] != Rational(j.p))
      out.push_back("work: job " + std::to_string(j.id) + " segment lengths do not sum to p");
    sched_cost += (unit ? Rational(1) : j.w) * it->second;
  }
  if (sched_cost != sched.scheduling_cost) out.push_back("cost: scheduling_cost mismatch");

  // Reserved slots before the last completion must be fully used.
  {
    Rational covered = 0;
    for (const auto& s : sched.segments) covered += s.end - s.start;
    std::int64_t before_cmax = 0;
    for (const auto t : reserved)
      if (Rational(t) < cmax) ++before_cmax;
    if (covered != Rational(before_cmax))
      out.push_back("utilization: reserved slots before the last completion are not fully used");
  }

  // Realized regions: consecutive realized split points.
  const auto candidates = split_point_candidates(tariff);
  std::vector<std::int64_t> splits;
  for (const auto q : candidates) {
    bool is_split = true;
    for (const auto& j : inst.jobs) {
      auto fs = first_start.find(j.id);
      if (fs == first_start.end()) continue;
      const bool started = fs->second < q;
      const bool completed = sched.completion_times.at(j.id) <= q;
      if (started != completed) {
        is_split = false;
        break;
      }
    }
    if (is_split) splits.push_back(q);
  }
  for (std::size_t x = 0; x + 1 < splits.size(); ++x) {
    const std::int64_t a = splits[x], b = splits[x + 1];
    int partial = 0;
    for (std::size_t k = 0; k < tariff.intervals.size(); ++k) {
      const auto& iv = tariff.intervals[k];
      const std::int64_t lo = std::max(iv.start, a), hi = std::min(iv.end, b);
      if (lo >= hi) continue;
      // Reserved slots of interval k are its prefix [start, start+count).
      const std::int64_t rhi = std::min(hi, iv.start + sched.profile.counts[k]);
      const std::int64_t used = std::max<std::int64_t>(0, rhi - lo);
      if (used > 0 && used < hi - lo) ++partial;
    }
    if (partial > 1)
      out.push_back("regions: more than one partially reserved interval in region [" +
                    std::to_string(a) + "," + std::to_string(b) + ")");
  }
  return out;
}

// Validity of an unrelated-machines timetable against its LP loads.
inline std::vector<std::string> audit_makespan_schedule(const Instance& inst,
                                                        const Schedule& sched,
                                                        const LpLoads& lp) {
  std::vector<std::string> out;
  const int m = inst.machines;
  std::vector<std::int64_t> reserved;
  for (std::size_t k = 0; k < inst.tariff.intervals.size(); ++k)
    for (std::int64_t i = 0; i < sched.profile.counts[k]; ++i)
      reserved.push_back(inst.tariff.intervals[k].start + i);
  std::sort(reserved.begin(), reserved.end());

  std::map<std::pair<int, int>, Rational> load_seen;  // (machine, job id)
  std::vector<std::vector<std::pair<Rational, Rational>>> busy(m);
  std::map<int, std::vector<std::pair<Rational, Rational>>> job_busy;
  Rational cmax = 0;
  for (const auto& s : sched.segments) {
    if (s.machine < 0 || s.machine >= m) {
      out.push_back("segment: bad machine index");
      continue;
    }
    if (s.start >= s.end) out.push_back("segment: empty or reversed");
    load_seen[{s.machine, s.job}] += s.end - s.start;
    busy[s.machine].push_back({s.start, s.end});
    job_busy[s.job].push_back({s.start, s.end});
    cmax = std::max(cmax, s.end);
    for (BigInt t = rat_floor(s.start); t < rat_ceil(s.end); ++t) {
      const std::int64_t ti = static_cast<std::int64_t>(t);
      if (!std::binary_search(reserved.begin(), reserved.end(), ti)) {
        out.push_back("segment: work in unreserved slot " + std::to_string(ti));
        break;
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    auto& v = busy[i];
    std::sort(v.begin(), v.end());
    for (std::size_t q = 1; q < v.size(); ++q)
      if (v[q].first < v[q - 1].second) {
        out.push_back("overlap: machine " + std::to_string(i) + " runs two jobs at once");
        break;
      }
  }
  for (auto& [id, v] : job_busy) {
    std::sort(v.begin(), v.end());
    for (std::size_t q = 1; q < v.size(); ++q)
      if (v[q].first < v[q - 1].second) {
        out.push_back("overlap: job " + std::to_string(id) + " runs on two machines at once");
        break;
      }
  }
  for (int i = 0; i < m; ++i)
    for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
      const Rational want = lp.loads[i][j];
      const Rational got = load_seen.count({i, inst.jobs[j].id})
                               ? load_seen[{i, inst.jobs[j].id}]
                               : Rational(0);
      if (want != got)
        out.push_back("load: machine " + std::to_string(i) + " job " +
                      std::to_string(inst.jobs[j].id) + " mismatch");
    }
  if (cmax > sched.scheduling_cost)
    out.push_back("makespan: segments extend past the claimed makespan");
  return out;
}

}  // namespace tariffsched
