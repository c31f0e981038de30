#pragma once

// Machine-readable run traces: one record per iteration plus a final summary
// record. Field names are a frozen contract for downstream plotting scripts:
//   iter, fbest, fmean, fmedian, error_s, error_c, fcount, xmean, xbest, sigma
// summary: xopt, fopt, exit_flag, convergence_status
// Files are written atomically (temp file + rename). jsonl is one JSON object
// per line; csv joins vector fields with semicolons.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceopt/core.hpp"

namespace ceopt {

enum class TraceFormat { jsonl, csv };

inline TraceFormat trace_format_from_string(const std::string& s) {
  if (s == "jsonl") return TraceFormat::jsonl;
  if (s == "csv") return TraceFormat::csv;
  throw ValidationError("unknown trace format '" + s + "' (expected jsonl or csv)");
}

namespace detail {

inline std::vector<double> to_std(const Vector& v) { return {v.begin(), v.end()}; }

inline Vector from_std(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string join_semicolon(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os << contents;
    if (!os) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline json record_to_json(const IterationRecord& r) {
  json j;
  j["iter"] = r.iter;
  j["fbest"] = r.fbest;
  j["fmean"] = r.fmean;
  j["fmedian"] = r.fmedian;
  j["error_s"] = r.error_s;
  j["error_c"] = r.error_c;
  j["fcount"] = r.fcount;
  j["xmean"] = to_std(r.xmean);
  j["xbest"] = to_std(r.xbest);
  j["sigma"] = to_std(r.sigma);
  return j;
}

}  // namespace detail

inline void emit_trace(const RunResult& result, const std::filesystem::path& path, TraceFormat fmt) {
  std::ostringstream os;
  if (fmt == TraceFormat::jsonl) {
    for (const auto& r : result.history) os << detail::record_to_json(r).dump() << "\n";
    json summary;
    summary["xopt"] = detail::to_std(result.xopt);
    summary["fopt"] = result.fopt;
    summary["exit_flag"] = result.exit_flag;
    summary["convergence_status"] = result.convergence_status;
    os << summary.dump() << "\n";
  } else {
    os << "iter,fbest,fmean,fmedian,error_s,error_c,fcount,xmean,xbest,sigma\n";
    for (const auto& r : result.history) {
      os << r.iter << ',' << detail::format_double(r.fbest) << ',' << detail::format_double(r.fmean)
         << ',' << detail::format_double(r.fmedian) << ',' << detail::format_double(r.error_s)
         << ',' << detail::format_double(r.error_c) << ',' << r.fcount << ','
         << detail::join_semicolon(r.xmean) << ',' << detail::join_semicolon(r.xbest) << ','
         << detail::join_semicolon(r.sigma) << "\n";
    }
    os << "\nxopt,fopt,exit_flag,convergence_status\n";
    os << detail::join_semicolon(result.xopt) << ',' << detail::format_double(result.fopt) << ','
       << result.exit_flag << ',' << (result.convergence_status ? "true" : "false") << "\n";
  }
  detail::write_atomically(path, os.str());
}

// Rebuilds the traced portion of a RunResult from a jsonl file. xmedian and
// settings_echo are not part of the trace contract and come back empty.
inline RunResult parse_trace_jsonl(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace '" + path.string() + "'");
  RunResult res;
  std::string line;
  json last;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    if (j.contains("xopt")) {
      last = std::move(j);
      continue;
    }
    IterationRecord r;
    r.iter = j.at("iter").get<long long>();
    r.fbest = j.at("fbest").get<double>();
    r.fmean = j.at("fmean").get<double>();
    r.fmedian = j.at("fmedian").get<double>();
    r.error_s = j.at("error_s").get<double>();
    r.error_c = j.at("error_c").get<double>();
    r.fcount = j.at("fcount").get<long long>();
    r.xmean = detail::from_std(j.at("xmean").get<std::vector<double>>());
    r.xbest = detail::from_std(j.at("xbest").get<std::vector<double>>());
    r.sigma = detail::from_std(j.at("sigma").get<std::vector<double>>());
    res.history.push_back(std::move(r));
  }
  if (last.is_null()) throw std::runtime_error("trace '" + path.string() + "' has no summary record");
  res.xopt = detail::from_std(last.at("xopt").get<std::vector<double>>());
  res.fopt = last.at("fopt").get<double>();
  res.exit_flag = last.at("exit_flag").get<int>();
  res.convergence_status = last.at("convergence_status").get<bool>();
  return res;
}

}  // namespace ceopt
