#include "stnabla/basics.hpp"

#include <cstdlib>
#include <sstream>

namespace stnabla {

std::string to_string(const Weight& w) {
  std::string out;
  for (int i = 0; i < w.rank(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(w[i]);
  }
  return out;
}

Weight parse_weight(const std::string& text, int rank) {
  Weight w = Weight::zero(rank);
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= rank) throw input_error("weight '" + text + "' has more than " + std::to_string(rank) + " coordinates");
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(item, &pos);
    } catch (const std::exception&) {
      throw input_error("weight coordinate '" + item + "' is not an integer");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size()) throw input_error("weight coordinate '" + item + "' is not an integer");
    if (v < INT32_MIN || v > INT32_MAX) throw input_error("weight coordinate '" + item + "' out of range");
    w[i++] = static_cast<std::int32_t>(v);
  }
  if (i != rank) throw input_error("weight '" + text + "' has " + std::to_string(i) + " coordinates, expected " + std::to_string(rank));
  return w;
}

std::string weight_key(const Weight& w) {
  return "[" + to_string(w) + "]";
}

}  // namespace stnabla
