#include "nonsaddle/conley.hpp"

#include <stdexcept>

namespace nonsaddle {

ConleyIndexReport conley_indices(const IndexPair& ip, Coefficients c) {
  ConleyIndexReport r;
  r.ch_plus = relative_betti(ip.N.shape(), ip.N, ip.exit, c);
  r.ch_minus = relative_betti(ip.N.shape(), ip.N, ip.entrance, c);
  r.block = &ip;
  return r;
}

const char* to_string(ConleyCertificate v) {
  return v == ConleyCertificate::Certified ? "non-saddle-certified"
                                           : "inconclusive";
}

ConleyCertificate nonsaddle_by_conley(const IndexPair& ip, const CellSet& w) {
  if (!ip.inv.subset_of(w) || !w.subset_of(ip.N))
    throw std::invalid_argument("nonsaddle_by_conley: need Inv <= W <= N");
  if (ip.exit.empty() || ip.entrance.empty())
    return ConleyCertificate::Inconclusive;
  if (components4(w).size() != 1) return ConleyCertificate::Inconclusive;
  if (components4(w - ip.inv).size() != 2)
    return ConleyCertificate::Inconclusive;
  ConleyIndexReport ci = conley_indices(ip);
  if (ci.ch_plus.betti[1] != 0 || ci.ch_minus.betti[1] != 0)
    return ConleyCertificate::Inconclusive;
  return ConleyCertificate::Certified;
}

const char* to_string(SmallNeighborhoodVerdict v) {
  switch (v) {
    case SmallNeighborhoodVerdict::Attractor:
      return "attractor";
    case SmallNeighborhoodVerdict::Repeller:
      return "repeller";
    case SmallNeighborhoodVerdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

SmallNeighborhoodResult small_neighborhood_test(const MapPair& maps,
                                                const IndexPair& ip,
                                                int depth) {
  SmallNeighborhoodResult out;
  for (int k = 1; k <= depth; ++k) {
    CellSet wk = dilate(ip.inv, k) & ip.N;
    out.ring_connected.push_back(components4(wk - ip.inv).size() == 1);
    CellSet nm = one_sided_core(maps.bwd, maps.fwd, wk);
    if ((nm - ip.inv).empty()) {
      out.verdict = SmallNeighborhoodVerdict::Attractor;
      out.decisive_depth = k;
      return out;
    }
    CellSet np = one_sided_core(maps.fwd, maps.bwd, wk);
    if ((np - ip.inv).empty()) {
      out.verdict = SmallNeighborhoodVerdict::Repeller;
      out.decisive_depth = k;
      return out;
    }
  }
  return out;
}

TorusShapeReport torus_shape_check(const IndexPair& ip,
                                   const PhaseSpace& space) {
  if (!space.periodic[0] || !space.periodic[1])
    throw std::invalid_argument(
        "torus_shape_check: both axes must be periodic");
  TorusShapeReport r;
  r.complement_connected = components4(ip.inv.complement()).size() == 1;
  r.verdict = nonsaddle_test(ip);
  r.proper_nonsaddle = r.verdict == Verdict::NonSaddle;
  r.profile = betti(ip.N.shape(), ip.nplus | ip.nminus);
  r.circle_profile = r.profile.betti == std::array<int64_t, 3>{1, 1, 0};
  r.all_hold =
      r.complement_connected && r.proper_nonsaddle && r.circle_profile;
  return r;
}

}  // namespace nonsaddle
