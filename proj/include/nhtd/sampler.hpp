// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_SAMPLER_HPP
#define NHTD_SAMPLER_HPP

#include <random>
#include <vector>

#include "nhtd/eaug.hpp"
#include "nhtd/features.hpp"

namespace nhtd {

// Randomly partitions the normal nodes into m subsets of size at most
// ceil(|v_n|/m) and pairs each with the full Trojan set. Batch i is
// subset i united with v_t. Deterministic for a fixed generator state.
// Throws InvalidM (m < 1) and OverlappingSets.
std::vector<std::vector<int>> trojan_sampling(const std::vector<int>& v_t,
                                              const std::vector<int>& v_n, int m,
                                              std::mt19937_64& rng);

enum class BatchContext { Induced, Full };

struct MiniBatch {
  std::vector<int> node_set;     // parent indices, ascending
  Eaug graph;                    // induced subgraph, or a copy-view of the parent
  std::vector<int> parent_index; // local row -> parent node
  FeatureMatrix features;        // rows aligned with graph nodes
  std::vector<std::array<double, 2>> targets;  // one-hot: normal=(1,0), trojan=(0,1)
  std::vector<int> loss_rows;    // local rows entering the loss
};

// Materializes the batches for one epoch. With BatchContext::Induced the
// message passing graph is the batch-induced subgraph; with Full it is the
// whole parent graph and only batch nodes enter the loss.
std::vector<MiniBatch> make_batches(const Eaug& g, const FeatureMatrix& fm, int m,
                                    std::mt19937_64& rng,
                                    BatchContext context = BatchContext::Induced);

}  // namespace nhtd

#endif  // NHTD_SAMPLER_HPP
