#pragma once

#include <string>

#include "divad/tensor.hpp"

namespace divad {

/// Binary tensor container used for frame stacks and depth maps.
/// Little-endian layout: magic "TNS1", u32 version, u8 rank, rank x u64
/// dims, u8 dtype (0 = f32, 1 = f64), raw payload, u32 CRC32 of all
/// preceding bytes.
void save_tns(const std::string& path, const Tensor<float>& t);
void save_tns(const std::string& path, const Tensor<double>& t);

Tensor<float> load_tns_f32(const std::string& path);
Tensor<double> load_tns_f64(const std::string& path);

/// Loads either dtype, widening f32 to f64 exactly.
Tensor<double> load_tns_any(const std::string& path);

}  // namespace divad
