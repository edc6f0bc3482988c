#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csaug::toy {

template <typename Scalar>
using SparseVector = Eigen::SparseVector<Scalar>;

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Hashed character n-gram features.
///
/// A token is wrapped in boundary markers (`^token$`) and cut into n-grams of
/// code points. Each n-gram increments bucket `fnv1a64(ngram) % dim`; the
/// resulting count vector is L2-normalised. An utterance is pooled as the
/// mean of its token vectors, and each position gets the concatenation
/// [previous, current, next] of token vectors (zero at the edges), giving a
/// context vector of size 3 * dim.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(std::size_t dim = 4096, std::size_t ngram = 3);

  std::size_t dim() const { return dim_; }
  std::size_t ngram() const { return ngram_; }
  std::size_t context_dim() const { return 3 * dim_; }

  /// Bucket index of every n-gram of `token`, in order (duplicates kept).
  std::vector<std::size_t> buckets(std::string_view token) const;

  template <typename Scalar>
  SparseVector<Scalar> token_vector(std::string_view token) const {
    SparseVector<Scalar> v(static_cast<Eigen::Index>(dim_));
    for (auto b : buckets(token)) v.coeffRef(static_cast<Eigen::Index>(b)) += Scalar(1);
    const Scalar norm = v.norm();
    if (norm > Scalar(0)) v /= norm;
    return v;
  }

  template <typename Scalar>
  SparseVector<Scalar> pooled(std::span<const SparseVector<Scalar>> token_vectors) const {
    SparseVector<Scalar> out(static_cast<Eigen::Index>(dim_));
    if (token_vectors.empty()) return out;
    for (const auto& v : token_vectors) out += v;
    out /= static_cast<Scalar>(token_vectors.size());
    return out;
  }

  template <typename Scalar>
  std::vector<SparseVector<Scalar>> contexts(std::span<const SparseVector<Scalar>> token_vectors) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    std::vector<SparseVector<Scalar>> out;
    out.reserve(token_vectors.size());
    for (std::size_t m = 0; m < token_vectors.size(); ++m) {
      SparseVector<Scalar> ctx(3 * d);
      auto place = [&](const SparseVector<Scalar>& v, Eigen::Index offset) {
        for (typename SparseVector<Scalar>::InnerIterator it(v); it; ++it) {
          ctx.insert(offset + it.index()) = it.value();
        }
      };
      if (m > 0) place(token_vectors[m - 1], 0);
      place(token_vectors[m], d);
      if (m + 1 < token_vectors.size()) place(token_vectors[m + 1], 2 * d);
      out.push_back(std::move(ctx));
    }
    return out;
  }

  bool operator==(const FeatureExtractor&) const = default;

 private:
  std::size_t dim_;
  std::size_t ngram_;
};

}  // namespace csaug::toy
