#include "qts/models/ansatz.hpp"

#include <sstream>

#include "qts/errors.hpp"

namespace qts::models {

namespace {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

Axis axis_from(char c) {
  switch (c) {
    case 'X': return Axis::X;
    case 'Y': return Axis::Y;
    case 'Z': return Axis::Z;
  }
  throw ConfigError("bad axis in ansatz text");
}

}  // namespace

bool AnsatzDescriptor::satisfies(int data_dim) const {
  if (blocks.empty()) return false;
  if (blocks.front().kind == BlockKind::VarEnt) return false;
  if (blocks.back().axis == Axis::Z) return false;
  const std::size_t n = blocks.size();
  for (std::size_t i = 0; i < n; ++i)
    if (blocks[i].axis == blocks[(i + 1) % n].axis) return false;

  std::vector<int> enc_per_dim(data_dim, 0);
  int n_var = 0;
  for (const AnsatzBlock& b : blocks) {
    if (b.kind == BlockKind::Enc) {
      if (b.dim_index < 0 || b.dim_index >= data_dim) return false;
      ++enc_per_dim[b.dim_index];
    } else {
      ++n_var;
    }
  }
  for (int c : enc_per_dim)
    if (c < 1 || c > 3) return false;
  return n_var >= 1 && n_var <= 12;
}

void AnsatzDescriptor::validate(int data_dim) const {
  if (!satisfies(data_dim)) throw ConfigError("ansatz violates structural constraints");
}

std::string AnsatzDescriptor::serialize() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) os << " | ";
    const AnsatzBlock& b = blocks[i];
    switch (b.kind) {
      case BlockKind::Enc: os << "E:" << axis_name(b.axis) << ":" << b.dim_index; break;
      case BlockKind::VarSingle: os << "VS:" << axis_name(b.axis); break;
      case BlockKind::VarEnt: os << "VE:" << axis_name(b.axis); break;
    }
  }
  return os.str();
}

AnsatzDescriptor AnsatzDescriptor::parse(const std::string& text) {
  AnsatzDescriptor d;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('|', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    // trim
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty block in ansatz text");
    tok = tok.substr(b, e - b + 1);

    AnsatzBlock blk;
    if (tok.rfind("E:", 0) == 0) {
      if (tok.size() < 5 || tok[3] != ':') throw ConfigError("bad encoding block: " + tok);
      blk.kind = BlockKind::Enc;
      blk.axis = axis_from(tok[2]);
      blk.dim_index = std::stoi(tok.substr(4));
    } else if (tok.rfind("VS:", 0) == 0 && tok.size() == 4) {
      blk.kind = BlockKind::VarSingle;
      blk.axis = axis_from(tok[3]);
    } else if (tok.rfind("VE:", 0) == 0 && tok.size() == 4) {
      blk.kind = BlockKind::VarEnt;
      blk.axis = axis_from(tok[3]);
    } else {
      throw ConfigError("bad ansatz block: " + tok);
    }
    d.blocks.push_back(blk);
    pos = end + 1;
  }
  if (d.blocks.empty()) throw ConfigError("empty ansatz text");
  return d;
}

AnsatzDescriptor sample_ansatz(int data_dim, Rng& rng) {
  if (data_dim < 1 || data_dim > 3) throw ConfigError("data_dim out of [1, 3]");
  auto rand_axis = [&rng] { return static_cast<Axis>(rng.integer(3)); };

  for (;;) {
    AnsatzDescriptor d;
    for (int j = 0; j < data_dim; ++j) {
      const int n_enc = 1 + static_cast<int>(rng.integer(3));
      for (int i = 0; i < n_enc; ++i) d.blocks.push_back({BlockKind::Enc, rand_axis(), j});
    }
    const int n_var = 1 + static_cast<int>(rng.integer(12));
    for (int i = 0; i < n_var; ++i) {
      const BlockKind kind = rng.integer(2) ? BlockKind::VarSingle : BlockKind::VarEnt;
      d.blocks.push_back({kind, rand_axis(), -1});
    }

    for (int attempt = 0; attempt < kAnsatzShuffleAttempts; ++attempt) {
      rng.shuffle(d.blocks);
      if (d.satisfies(data_dim)) return d;
    }
    // unsatisfiable shuffle budget: drop this block set and redraw
  }
}

}  // namespace qts::models
