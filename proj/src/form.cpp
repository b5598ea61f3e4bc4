#include "stnabla/form.hpp"

namespace stnabla {

Int bracket(const Character& a, const Character& b) {
  const RootSystem& rs = a.root_system();
  Int acc = 0;
  const bool a_smaller = a.support().size() <= b.support().size();
  for (const auto& [pt, sign] : rs.dot_points(Weight::zero(rs.rank()))) {
    Int conv = 0;
    if (a_smaller) {
      for (const auto& [eta, m] : a.support()) conv += m * b.at(eta - pt);
    } else {
      for (const auto& [eta, m] : b.support()) conv += m * a.at(eta + pt);
    }
    acc += Int(sign) * conv;
  }
  return acc;
}

Int bracket(const NablaExpansion& a, const NablaExpansion& b) {
  const NablaExpansion& small = a.size() <= b.size() ? a : b;
  const NablaExpansion& large = a.size() <= b.size() ? b : a;
  Int acc = 0;
  for (const auto& [w, m] : small) {
    auto it = large.find(w);
    if (it != large.end()) acc += m * it->second;
  }
  return acc;
}

Int nabla_coefficient(const RootSystem& rs, const Character& a, const Weight& la) {
  if (!rs.is_dominant(la)) throw input_error("coefficient extraction needs a dominant weight");
  Int acc = 0;
  for (const auto& [pt, sign] : rs.dot_points(la)) acc += Int(sign) * a.at(pt);
  return acc;
}

}  // namespace stnabla
