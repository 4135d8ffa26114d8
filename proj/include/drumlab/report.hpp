#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drumlab/asymmetry.hpp"
#include "drumlab/constants.hpp"
#include "drumlab/eigensolver.hpp"
#include "drumlab/heart.hpp"
#include "drumlab/placement.hpp"
#include "drumlab/spectral.hpp"
#include "drumlab/version.hpp"

namespace drumlab {

using ordered_json = nlohmann::ordered_json;

inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// NaN is not representable in JSON; reports carry it as null.
inline ordered_json json_num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline ordered_json spectral_record(const SpectralResult& r) {
  ordered_json j;
  j["lambda1"] = json_num(r.lambda1);
  j["residual"] = json_num(r.residual);
  j["iterations"] = r.iterations;
  j["h"] = r.mask->spec().h;
  j["active_cells"] = r.mask->n_active();
  j["disconnected"] = r.disconnected;
  j["n_components"] = r.n_components;
  return j;
}

inline ordered_json bound_report_json(const BoundReport& b) {
  ordered_json j;
  j["lambda1_domain"] = json_num(b.lambda1_domain);
  j["lambda1_complement"] = json_num(b.lambda1_complement);
  j["rho_x"] = json_num(b.rho_x);
  j["rho0"] = json_num(b.rho0);
  j["beta"] = json_num(b.beta_value);
  j["ball_bound"] = json_num(b.ball_bound);
  j["mechanism_pass"] = b.mechanism_pass;
  j["stated_bound_pass"] = b.stated_bound_pass;
  j["slack_mechanism"] = json_num(b.slack_mechanism);
  j["slack_stated"] = json_num(b.slack_stated);
  return j;
}

inline ordered_json constants_json(const ConstantsProfile& p) {
  ordered_json j;
  j["n"] = p.n;
  j["c0"] = json_num(p.c0);
  j["r0"] = json_num(p.r0);
  j["beta0"] = json_num(p.beta0);
  j["C0"] = json_num(p.C0);
  j["C1"] = json_num(p.C1);
  j["C2"] = json_num(p.C2);
  j["omega_n"] = json_num(p.omega_n);
  ordered_json prov;
  prov["c0"] = provenance_name(p.c0_prov);
  prov["r0"] = provenance_name(p.r0_prov);
  prov["beta0"] = provenance_name(p.beta0_prov);
  prov["C0"] = provenance_name(p.C0_prov);
  prov["C1"] = provenance_name(p.C1_prov);
  prov["C2"] = provenance_name(p.C2_prov);
  prov["omega_n"] = provenance_name(p.omega_n_prov);
  j["provenance"] = prov;
  return j;
}

inline Provenance provenance_from_name(const std::string& s) {
  if (s == "analytic") return Provenance::Analytic;
  if (s == "calibrated") return Provenance::Calibrated;
  throw std::runtime_error("unknown provenance '" + s + "'");
}

inline ConstantsProfile constants_from_json(const ordered_json& j) {
  ConstantsProfile p;
  p.n = j.at("n").get<int>();
  p.c0 = j.at("c0").get<double>();
  p.r0 = j.at("r0").get<double>();
  p.beta0 = j.at("beta0").get<double>();
  p.C0 = j.at("C0").get<double>();
  p.C1 = j.at("C1").get<double>();
  p.C2 = j.at("C2").get<double>();
  p.omega_n = j.at("omega_n").get<double>();
  const auto& prov = j.at("provenance");
  p.c0_prov = provenance_from_name(prov.at("c0").get<std::string>());
  p.r0_prov = provenance_from_name(prov.at("r0").get<std::string>());
  p.beta0_prov = provenance_from_name(prov.at("beta0").get<std::string>());
  p.C0_prov = provenance_from_name(prov.at("C0").get<std::string>());
  p.C1_prov = provenance_from_name(prov.at("C1").get<std::string>());
  p.C2_prov = provenance_from_name(prov.at("C2").get<std::string>());
  p.omega_n_prov = provenance_from_name(prov.at("omega_n").get<std::string>());
  p.validate();
  return p;
}

inline ConstantsProfile load_constants(const std::string& profile) {
  if (profile == "analytic-2d") return ConstantsProfile::analytic_2d();
  std::ifstream in(profile, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open constants profile '" + profile + "'");
  ordered_json j;
  in >> j;
  return constants_from_json(j);
}

inline ordered_json asymmetry_json(const AsymmetryEstimate& e) {
  ordered_json j;
  j["alpha"] = json_num(e.alpha);
  j["witness_point"] = {json_num(e.witness_point.x), json_num(e.witness_point.y)};
  j["witness_radius"] = json_num(e.witness_radius);
  return j;
}

inline ordered_json heart_json(const HeartResult& hr) {
  ordered_json j;
  ordered_json verts = ordered_json::array();
  for (const Vec2& v : hr.vertices) verts.push_back({json_num(v.x), json_num(v.y)});
  j["vertices"] = verts;
  j["point"] = {json_num(hr.point.x), json_num(hr.point.y)};
  j["degenerate"] = hr.degenerate;
  j["diameter"] = json_num(hr.diameter());
  return j;
}

inline ordered_json hkk_json(const HkkReport& r) {
  ordered_json j;
  j["max_dist_to_plane"] = json_num(r.max_dist_to_plane);
  j["max_on_plane"] = r.max_on_plane;
  j["min_applicable"] = r.min_applicable;
  j["max_boundary_gap"] = json_num(r.max_boundary_gap);
  j["min_touches_boundary"] = r.min_touches_boundary;
  j["tol"] = json_num(r.tol);
  j["pass"] = r.pass;
  return j;
}

inline ordered_json localization_json(const LocalizationReport& r) {
  ordered_json j;
  j["c_ratio"] = json_num(r.c_ratio);
  j["hypothesis_met"] = r.hypothesis_met;
  j["radius_bound"] = json_num(r.radius_bound);
  j["worst_rho"] = json_num(r.worst_rho);
  j["slack"] = json_num(r.slack);
  j["pass"] = r.pass;
  return j;
}

inline ordered_json containment_json(const ContainmentReport& r) {
  ordered_json j;
  j["mu_ratio"] = json_num(r.mu_ratio);
  j["comparable_branch"] = r.comparable_branch;
  j["worst_rho"] = json_num(r.worst_rho);
  j["tol"] = json_num(r.tol);
  j["pass"] = r.pass;
  return j;
}

inline ordered_json heart_membership_json(const HeartMembershipReport& r) {
  ordered_json j;
  j["worst_distance"] = json_num(r.worst_distance);
  j["tol"] = json_num(r.tol);
  j["pass"] = r.pass;
  return j;
}

inline ordered_json landscape_summary_json(const PlacementLandscape& L) {
  ordered_json j;
  j["lambda1_domain"] = json_num(L.lambda1_domain);
  j["mu"] = json_num(L.mu);
  ordered_json argmax = ordered_json::array();
  for (const Vec2& v : L.argmax) argmax.push_back({json_num(v.x), json_num(v.y)});
  j["argmax"] = argmax;
  j["lambda_min_contained"] = json_num(L.lambda_min_contained);
  ordered_json argmin = ordered_json::array();
  for (const Vec2& v : L.argmin) argmin.push_back({json_num(v.x), json_num(v.y)});
  j["argmin"] = argmin;
  j["lattice_step"] = json_num(L.lattice_step);
  j["offsets"] = L.entries.size();
  return j;
}

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings_s;
};

// Timings vary run to run; every other field is deterministic. Byte-level
// reproducibility is promised for the data products, not the manifest.
inline ordered_json manifest_json(const RunManifest& m) {
  ordered_json j;
  j["command"] = m.command;
  j["version"] = kVersion;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["outputs"] = m.outputs;
  ordered_json t;
  for (const auto& [k, v] : m.timings_s) t[k] = json_num(v);
  j["timings_s"] = t;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace drumlab
