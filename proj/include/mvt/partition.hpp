#ifndef MVT_PARTITION_HPP
#define MVT_PARTITION_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace mvt {

/// Split of the coordinates {0..p-1} into an observed block (block1) and a
/// free block (block2). Blocks are ordered; operations return quantities in
/// block order, so any pair of disjoint index sets covering 0..p-1 works.
///
/// Either block may be empty at construction. Conditioning requires a
/// nonempty block2 and marginalization a nonempty block1; an empty block1 is
/// the "condition on nothing" identity.
class Partition {
 public:
  /// Throws Error{InvalidPartition} unless block1 and block2 are disjoint and
  /// together cover 0..dim-1 exactly once.
  Partition(std::vector<std::size_t> block1, std::vector<std::size_t> block2, std::size_t dim);

  /// block1 = observed, block2 = the remaining indices in increasing order.
  static Partition observe(std::vector<std::size_t> observed, std::size_t dim);

  const std::vector<std::size_t>& block1() const noexcept { return block1_; }
  const std::vector<std::size_t>& block2() const noexcept { return block2_; }
  std::size_t p1() const noexcept { return block1_.size(); }
  std::size_t p2() const noexcept { return block2_.size(); }
  std::size_t dim() const noexcept { return block1_.size() + block2_.size(); }

 private:
  std::vector<std::size_t> block1_;
  std::vector<std::size_t> block2_;
};

}  // namespace mvt

#endif  // MVT_PARTITION_HPP
