#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "deepcoda/network.hpp"

namespace deepcoda {

// Flat text model format, one tensor per line:
//
//   # deepcoda model
//   format = deepcoda-params 1
//   dims = D B H
//   head = self_explain
//   beta = <D*B values, row-major>
//   beta0 = <B values>
//   mlp_w1 = <B*H values>
//   mlp_b1 = <H values>
//   mlp_w2 = <H*B values>
//   mlp_b2 = <B values>
//   linear_v = <B values>
//   linear_v0 = <1 value>
//
// Values are printed with 17 significant digits, so a save/load cycle
// reproduces every parameter bit for bit.
void write_params(std::ostream& out, const DeepCodaParams& p);
DeepCodaParams read_params(std::istream& in);

void save_params(const std::filesystem::path& path, const DeepCodaParams& p);
DeepCodaParams load_params(const std::filesystem::path& path);

// Shortest-safe decimal form used by every text artifact (%.17g).
std::string format_double(double v);

}  // namespace deepcoda
