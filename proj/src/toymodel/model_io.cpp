#include "csaug/toymodel/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace csaug::toy {

namespace {

constexpr std::array<char, 8> kMagic = {'C', 'S', 'A', 'U', 'G', 'T', 'O', 'Y'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_matrix(std::ostream& out, const Eigen::Ref<const Matrix<double>>& m) {
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_u64(out, std::bit_cast<std::uint64_t>(m(r, c)));
  }
}

[[noreturn]] void truncated() { throw Error(ErrorCode::MalformedRecord, "model file is truncated or corrupt"); }

std::uint64_t get_bytes(std::istream& in, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) truncated();
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::istream& in) { return get_bytes(in, 8); }

std::uint64_t get_count(std::istream& in, std::uint64_t limit) {
  const auto v = get_u64(in);
  if (v > limit) truncated();
  return v;
}

std::string get_string(std::istream& in) {
  const auto len = get_count(in, 1u << 20);
  std::string s(len, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(len))) truncated();
  return s;
}

Matrix<double> get_matrix(std::istream& in) {
  const auto rows = get_count(in, 1u << 24);
  const auto cols = get_count(in, 1u << 26);
  if (rows * cols > (std::uint64_t{1} << 30)) truncated();
  Matrix<double> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = std::bit_cast<double>(get_u64(in));
  }
  return m;
}

Vector<double> get_vector(std::istream& in) {
  auto m = get_matrix(in);
  if (m.cols() != 1) truncated();
  return m.col(0);
}

}  // namespace

void save_model(const ToyJointModel& model, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, sizeof(double));
  put_u64(out, model.features().dim());
  put_u64(out, model.features().ngram());
  put_u64(out, model.labels().intents().size());
  for (const auto& s : model.labels().intents()) put_string(out, s);
  put_u64(out, model.labels().tags().size());
  for (const auto& s : model.labels().tags()) put_string(out, s);
  const auto& p = model.parameters();
  put_matrix(out, p.intent_weights);
  put_matrix(out, p.intent_bias);
  put_matrix(out, p.slot_weights);
  put_matrix(out, p.slot_bias);
}

void save_model(const ToyJointModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  save_model(model, out);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

ToyJointModel load_model(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw Error(ErrorCode::MalformedRecord, "not a toy model file (bad magic)");
  }
  const auto version = get_bytes(in, 4);
  const auto width = get_bytes(in, 4);
  if (version != kVersion || width != sizeof(double)) {
    throw Error(ErrorCode::MalformedRecord, "unsupported toy model version " + std::to_string(version));
  }
  const auto dim = get_count(in, 1u << 24);
  const auto ngram = get_count(in, 64);
  std::vector<std::string> intents(get_count(in, 1u << 20));
  for (auto& s : intents) s = get_string(in);
  std::vector<std::string> tags(get_count(in, 1u << 20));
  for (auto& s : tags) s = get_string(in);

  JointParameters<double> p;
  p.intent_weights = get_matrix(in);
  p.intent_bias = get_vector(in);
  p.slot_weights = get_matrix(in);
  p.slot_bias = get_vector(in);
  return ToyJointModel(FeatureExtractor(dim, ngram), LabelInventory(std::move(intents), std::move(tags)),
                       std::move(p));
}

ToyJointModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return load_model(in);
}

}  // namespace csaug::toy
