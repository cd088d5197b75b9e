#pragma once

#include <string>
#include <vector>

#include "qts/rng.hpp"

namespace qts::models {

enum class Axis { X, Y, Z };
enum class BlockKind { Enc, VarSingle, VarEnt };

struct AnsatzBlock {
  BlockKind kind = BlockKind::VarSingle;
  Axis axis = Axis::X;
  int dim_index = -1;  // Enc only: which data dimension this block encodes
};

// Block list for the recurrent-encoding circuit. Structural constraints
// (checked cyclically because the list repeats once per time step):
//   - first block is not an entangling block
//   - last block's axis is not Z
//   - no two cyclically consecutive blocks share an axis
//   - 1..3 Enc blocks per data dimension; 1..12 variational blocks total
struct AnsatzDescriptor {
  std::vector<AnsatzBlock> blocks;

  void validate(int data_dim) const;  // throws ConfigError on violation
  bool satisfies(int data_dim) const;
  std::string serialize() const;      // "E:Y:0 | VS:X | VE:Z"
  static AnsatzDescriptor parse(const std::string& text);
};

// Uniformly draws block counts, kinds and axes, then shuffles until the
// constraints hold (up to kAnsatzShuffleAttempts); an unsatisfiable set is
// discarded and redrawn, so the sampler is total.
inline constexpr int kAnsatzShuffleAttempts = 50;
AnsatzDescriptor sample_ansatz(int data_dim, Rng& rng);

}  // namespace qts::models
