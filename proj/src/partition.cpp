#include "mvt/partition.hpp"

#include <string>

#include "mvt/error.hpp"

namespace mvt {

Partition::Partition(std::vector<std::size_t> block1, std::vector<std::size_t> block2,
                     std::size_t dim)
    : block1_(std::move(block1)), block2_(std::move(block2)) {
  if (block1_.size() + block2_.size() != dim) {
    throw Error(Errc::InvalidPartition,
                "blocks hold " + std::to_string(block1_.size() + block2_.size()) +
                    " indices, dimension is " + std::to_string(dim));
  }
  std::vector<bool> seen(dim, false);
  for (const auto* block : {&block1_, &block2_}) {
    for (std::size_t i : *block) {
      if (i >= dim) {
        throw Error(Errc::InvalidPartition,
                    "index " + std::to_string(i) + " out of range for dimension " + std::to_string(dim));
      }
      if (seen[i]) throw Error(Errc::InvalidPartition, "index " + std::to_string(i) + " repeated");
      seen[i] = true;
    }
  }
}

Partition Partition::observe(std::vector<std::size_t> observed, std::size_t dim) {
  std::vector<bool> taken(dim, false);
  for (std::size_t i : observed) {
    if (i < dim) taken[i] = true;
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  return Partition(std::move(observed), std::move(rest), dim);
}

}  // namespace mvt
