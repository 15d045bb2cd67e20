#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "infsup/bound_engine.hpp"
#include "infsup/channel_geometry.hpp"
#include "infsup/rectangle_norms.hpp"
#include "infsup/window_certificates.hpp"

namespace infsup {

using nlohmann::json;

inline json to_json(const WindowCertificate& w) {
  return json{{"k1", w.k1}, {"j0", w.j0},         {"t", w.t},
              {"nu_min", w.nu_min}, {"nu_max", w.nu_max}};
}

inline WindowCertificate window_from_json(const json& j, double c_thresh) {
  WindowCertificate w;
  w.k1 = j.at("k1").get<int>();
  w.j0 = j.at("j0").get<int>();
  w.t = j.at("t").get<double>();
  w.nu_min = j.at("nu_min").get<double>();
  w.nu_max = j.at("nu_max").get<double>();
  w.c_thresh = c_thresh;
  return w;
}

inline json to_json(const EnvelopeTable& t) {
  json certs = json::array();
  for (const auto& w : t.certificates) certs.push_back(to_json(w));
  json gaps = json::array();
  for (const auto& g : t.gaps) gaps.push_back(json::array({g.first, g.second}));
  return json{{"header",
               {{"c_thresh", t.c_thresh}, {"covered", json::array({t.covered_lo, t.covered_hi})}}},
              {"certificates", certs},
              {"gaps", gaps}};
}

inline EnvelopeTable envelope_from_json(const json& j) {
  EnvelopeTable t;
  t.c_thresh = j.at("header").at("c_thresh").get<double>();
  t.covered_lo = j.at("header").at("covered").at(0).get<double>();
  t.covered_hi = j.at("header").at("covered").at(1).get<double>();
  for (const auto& c : j.at("certificates"))
    t.certificates.push_back(window_from_json(c, t.c_thresh));
  if (j.contains("gaps"))
    for (const auto& g : j.at("gaps"))
      t.gaps.emplace_back(g.at(0).get<double>(), g.at(1).get<double>());
  return t;
}

inline json to_json(const RectangleField& f) {
  json re = json::array(), im = json::array();
  for (int n = -f.N(); n <= f.N(); ++n)
    for (int j = 1; j <= f.J(); ++j) {
      re.push_back(f.b_at(n, j).real());
      im.push_back(f.b_at(n, j).imag());
    }
  return json{{"L", f.L()}, {"H", f.H()}, {"N", f.N()}, {"J", f.J()}, {"re", re}, {"im", im}};
}

inline RectangleField field_from_json(const json& j, FieldKind kind = FieldKind::Sine) {
  const double L = j.at("L").get<double>(), H = j.at("H").get<double>();
  const int N = j.at("N").get<int>(), J = j.at("J").get<int>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<int>(re.size()) != (2 * N + 1) * J || re.size() != im.size())
    throw std::invalid_argument("field_from_json: coefficient arrays have the wrong length");
  Eigen::MatrixXcd b(2 * N + 1, J);
  int idx = 0;
  for (int r = 0; r < 2 * N + 1; ++r)
    for (int c = 0; c < J; ++c, ++idx)
      b(r, c) = std::complex<double>(re.at(idx).get<double>(), im.at(idx).get<double>());
  return RectangleField::from_coefficients(L, H, std::move(b), kind);
}

inline json to_json(const ChannelGeometry& g) {
  json j{{"L", g.L()}};
  switch (g.family()) {
    case ChannelGeometry::Family::Constant:
      j["family"] = "constant";
      j["c"] = g.summary().h0;
      break;
    case ChannelGeometry::Family::Cosine: {
      const auto& p = g.piece(0);
      j["family"] = "cosine";
      j["c0"] = p.v0;
      j["c1"] = p.v1;
      break;
    }
    case ChannelGeometry::Family::Gap: {
      j["family"] = "gap";
      j["h0"] = g.summary().h0;
      double w = 0.0;
      for (int i = 0; i < g.piece_count(); ++i)
        if (g.piece(i).kind == ChannelGeometry::Piece::Kind::Quintic)
          w = (g.piece(i).x1 - g.piece(i).x0) / g.L();
      j["width"] = w;
      break;
    }
    case ChannelGeometry::Family::Sawtooth:
      j["family"] = "sawtooth";
      j["h0"] = g.summary().h0;
      j["h1"] = g.summary().h1;
      break;
    case ChannelGeometry::Family::Sampled: {
      j["family"] = "sampled";
      json nodes = json::array();
      for (int i = 0; i < g.piece_count(); ++i) {
        const auto& p = g.piece(i);
        nodes.push_back(json::array({p.x0, p.v0}));
      }
      nodes.push_back(json::array({g.piece(g.piece_count() - 1).x1,
                                   g.piece(g.piece_count() - 1).v1}));
      j["nodes"] = nodes;
      break;
    }
  }
  return j;
}

inline ChannelGeometry geometry_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "sampled") {
    std::vector<std::array<double, 2>> nodes;
    for (const auto& n : j.at("nodes"))
      nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    return ChannelGeometry::sampled(nodes);
  }
  const double L = j.value("L", 1.0);
  if (family == "constant") return ChannelGeometry::constant(j.at("c").get<double>(), L);
  if (family == "cosine")
    return ChannelGeometry::cosine(j.at("c0").get<double>(), j.at("c1").get<double>(), L);
  if (family == "gap")
    return ChannelGeometry::gap(j.at("h0").get<double>(), j.value("width", 0.125), L);
  if (family == "sawtooth")
    return ChannelGeometry::sawtooth(j.at("h0").get<double>(), j.at("h1").get<double>(), L);
  throw std::invalid_argument("geometry_from_json: unknown family '" + family + "'");
}

inline json to_json(const GeometrySummary& s) {
  return json{{"L", s.L},   {"h0", s.h0},       {"h1", s.h1},
              {"M", s.M},   {"M2sq", s.M2sq},
              {"class", s.cls == Smoothness::C11 ? "C11" : "C01"}};
}

inline json to_json(const BoundReport& r) {
  json j{{"geometry", to_json(r.geometry)}, {"theorem", r.theorem}, {"H", r.H},
         {"recommended", r.recommended}};
  auto put = [&](const char* key, double v) {
    if (!std::isnan(v)) j[key] = v;
  };
  put("C1", r.C1);
  put("C2", r.C2);
  put("C3sq", r.C3sq);
  put("C4sq", r.C4sq);
  put("C5sq", r.C5sq);
  put("theta", r.theta);
  put("beta_inv", r.beta_inv);
  put("beta_inv_assembled", r.beta_inv_assembled);
  put("C", r.pf_C);
  put("C_assembled", r.pf_C_assembled);
  put("K", r.pf_K);
  if (!r.gammas.empty()) j["gammas"] = r.gammas;
  return j;
}

}  // namespace infsup
