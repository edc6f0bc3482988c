#pragma once

#include <filesystem>
#include <iosfwd>

#include "csaug/toymodel/joint_model.hpp"

namespace csaug::toy {

// Layout (all integers little-endian):
//   16-byte header: "CSAUGTOY", u32 version (1), u32 scalar width (8)
//   u64 hash dim, u64 n-gram size
//   u64 intent count, then per intent u64 byte length + UTF-8 bytes
//   u64 tag count, then tags the same way
//   intent weights, intent bias, slot weights, slot bias, each as
//   u64 rows, u64 cols, rows*cols f64 in row-major order

void save_model(const ToyJointModel& model, std::ostream& out);
void save_model(const ToyJointModel& model, const std::filesystem::path& path);

/// Throws MalformedRecord on a bad header or truncated file.
ToyJointModel load_model(std::istream& in);
ToyJointModel load_model(const std::filesystem::path& path);

}  // namespace csaug::toy
