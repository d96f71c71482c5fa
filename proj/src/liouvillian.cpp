// Copyright 2026 The fwmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fwm/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fwm {

std::vector<Charge> conserved_charges(const ModelSpec& spec) {
  // The pair term moves (m1, m2, m0) by +-(1, 1, -2), every loss operator
  // shifts ket and bra alike, and detunings are diagonal.
  const Charge total{{1, 1, 1}, 0};
  const Charge imbalance{{0, 1, -1}, 0};
  const Charge pump_parity{{1, 0, 0}, 2};
  switch (spec.scheme) {
    case PumpScheme::kNone: return {total, imbalance};
    case PumpScheme::kPump0: return {imbalance};
    case PumpScheme::kPump12: return {pump_parity};
  }
  return {};
}

SectorLayout::SectorLayout(const FockBasis& basis, const std::vector<Charge>& charges)
    : basis_(basis), charges_(charges), sector_of_(basis.dim()), local_of_(basis.dim()) {
  for (const auto& c : charges_) {
    if (c.modulus < 0) throw std::invalid_argument("charge modulus must be >= 0");
  }
  for (std::size_t g = 0; g < basis_.dim(); ++g) {
    const auto k = key(basis_.occupations(g));
    auto [it, inserted] = index_.try_emplace(k, members_.size());
    if (inserted) members_.emplace_back();
    sector_of_[g] = it->second;
    local_of_[g] = members_[it->second].size();
    members_[it->second].push_back(g);
  }
}

std::vector<long> SectorLayout::key(const Occupation& occ) const {
  std::vector<long> k;
  k.reserve(charges_.size());
  for (const auto& c : charges_) {
    long v = static_cast<long>(c.weight[0]) * occ.m0 + static_cast<long>(c.weight[1]) * occ.m1 +
             static_cast<long>(c.weight[2]) * occ.m2;
    if (c.modulus > 0) v = ((v % c.modulus) + c.modulus) % c.modulus;
    k.push_back(v);
  }
  return k;
}

long SectorLayout::find_sector(const std::vector<long>& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t SectorLayout::stored_elements() const {
  std::size_t total = 0;
  for (const auto& m : members_) total += m.size() * m.size();
  return total;
}

bool SectorLayout::supports(const DensityMatrix& rho) const {
  if (!(rho.basis() == basis_)) return false;
  const auto& d = rho.data();
  for (Eigen::Index c = 0; c < d.cols(); ++c) {
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
      if (d(r, c) != Complex(0.0, 0.0) &&
          sector_of_[static_cast<std::size_t>(r)] != sector_of_[static_cast<std::size_t>(c)]) {
        return false;
      }
    }
  }
  return true;
}

BlockState to_blocks(const SectorLayout& layout, const DensityMatrix& rho) {
  if (!(rho.basis() == layout.basis())) throw std::invalid_argument("basis mismatch");
  BlockState blocks;
  blocks.reserve(layout.sector_count());
  for (std::size_t s = 0; s < layout.sector_count(); ++s) {
    const auto& mem = layout.members(s);
    const auto n = static_cast<Eigen::Index>(mem.size());
    DenseMatrix b(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        b(r, c) = rho(mem[static_cast<std::size_t>(r)], mem[static_cast<std::size_t>(c)]);
      }
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

DensityMatrix to_dense(const SectorLayout& layout, const BlockState& blocks) {
  if (blocks.size() != layout.sector_count()) throw std::invalid_argument("block count mismatch");
  DensityMatrix rho(layout.basis());
  auto& d = rho.data();
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const auto& mem = layout.members(s);
    const auto n = static_cast<Eigen::Index>(mem.size());
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) {
        d(static_cast<Eigen::Index>(mem[static_cast<std::size_t>(r)]),
          static_cast<Eigen::Index>(mem[static_cast<std::size_t>(c)])) = blocks[s](r, c);
      }
    }
  }
  return rho;
}

namespace {

struct OffDiagonal {
  std::size_t col;
  double fixed;
  double pump;
};

double require_real(Complex v) {
  if (v.imag() != 0.0) throw std::invalid_argument("coherent part must be real symmetric");
  return v.real();
}

}  // namespace

LindbladGenerator::LindbladGenerator(const ModelSpec& spec, const HamiltonianParts& parts,
                                     std::vector<Charge> charges)
    : spec_(spec), layout_(parts.nonlinear.basis(), charges) {
  const FockBasis& basis = layout_.basis();
  const std::size_t dim = basis.dim();

  std::vector<double> energy(dim, 0.0);
  for (const auto& e : parts.detune.entries()) {
    if (e.row != e.col) throw std::invalid_argument("detuning part must be diagonal");
    energy[e.row] += require_real(e.value);
  }

  std::vector<std::vector<OffDiagonal>> rows(dim);
  auto add = [&](const SparseOperator& op, bool is_pump) {
    if (!(op.basis() == basis)) throw std::invalid_argument("Hamiltonian parts use different bases");
    for (const auto& e : op.entries()) {
      const double v = require_real(e.value);
      if (e.row == e.col) {
        if (is_pump) throw std::invalid_argument("pump operators must be off-diagonal");
        energy[e.row] += v;
        continue;
      }
      if (op.at(e.col, e.row) != e.value) {
        throw std::invalid_argument("coherent part must be real symmetric");
      }
      if (layout_.sector_of(e.row) != layout_.sector_of(e.col)) {
        throw std::logic_error("Hamiltonian term breaks an assumed conserved charge");
      }
      auto& row = rows[e.row];
      auto it = std::find_if(row.begin(), row.end(), [&](const OffDiagonal& o) { return o.col == e.col; });
      if (it == row.end()) it = row.insert(row.end(), OffDiagonal{e.col, 0.0, 0.0});
      (is_pump ? it->pump : it->fixed) += v;
    }
  };
  add(parts.nonlinear, false);
  for (const auto& p : parts.pump_ops) add(p, true);

  sectors_.resize(layout_.sector_count());
  for (std::size_t s = 0; s < layout_.sector_count(); ++s) {
    const auto& mem = layout_.members(s);
    Sector& sec = sectors_[s];
    sec.energy.resize(mem.size());
    sec.loss.resize(mem.size());
    sec.row_ptr.assign(1, 0);
    for (std::size_t l = 0; l < mem.size(); ++l) {
      const std::size_t g = mem[l];
      sec.energy[l] = energy[g];
      sec.loss[l] = spec_.gamma * basis.occupations(g).total();
      auto row = rows[g];
      std::sort(row.begin(), row.end(), [](const OffDiagonal& a, const OffDiagonal& b) { return a.col < b.col; });
      for (const auto& o : row) {
        sec.col.push_back(layout_.local_of(o.col));
        sec.k_fixed.push_back(o.fixed);
        sec.k_pump.push_back(o.pump);
      }
      sec.row_ptr.push_back(sec.col.size());
    }
    for (Mode mode : kAllModes) {
      Jump& jump = sec.jumps[static_cast<int>(mode)];
      jump.up.assign(mem.size(), -1);
      jump.coeff.assign(mem.size(), 0.0);
      for (std::size_t l = 0; l < mem.size(); ++l) {
        const int m = basis.occupations(mem[l]).of(mode);
        if (m >= basis.n_max()) continue;
        const std::size_t up = mem[l] + basis.stride(mode);
        const auto target = static_cast<long>(layout_.sector_of(up));
        if (jump.target >= 0 && jump.target != target) {
          throw std::logic_error("loss operator does not shift the charge uniformly");
        }
        jump.target = target;
        jump.up[l] = static_cast<long>(layout_.local_of(up));
        jump.coeff[l] = std::sqrt(static_cast<double>(m + 1));
      }
    }
  }
}

BlockState LindbladGenerator::zero_state() const {
  BlockState blocks;
  blocks.reserve(layout_.sector_count());
  for (std::size_t s = 0; s < layout_.sector_count(); ++s) {
    const auto n = static_cast<Eigen::Index>(layout_.members(s).size());
    blocks.push_back(DenseMatrix::Zero(n, n));
  }
  return blocks;
}

void LindbladGenerator::apply(double pump_amplitude, const BlockState& in, BlockState& out,
                              bool hermitian) const {
  if (in.size() != sectors_.size()) throw std::invalid_argument("state has wrong sector count");
  if (out.size() != sectors_.size()) out = zero_state();
  std::vector<double> k;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const Sector& sec = sectors_[s];
    const auto n = static_cast<Eigen::Index>(sec.energy.size());
    if (in[s].rows() != n || in[s].cols() != n) throw std::invalid_argument("block size mismatch");
    if (out[s].rows() != n || out[s].cols() != n) out[s].resize(n, n);
    k.resize(sec.k_fixed.size());
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = sec.k_fixed[j] + pump_amplitude * sec.k_pump[j];
    apply_sector(s, k, in, out[s], hermitian);
  }
}

void LindbladGenerator::apply_sector(std::size_t s, const std::vector<double>& k,
                                     const BlockState& in, DenseMatrix& out, bool hermitian) const {
  const Sector& sec = sectors_[s];
  const DenseMatrix& rho = in[s];
  const std::size_t size = sec.energy.size();
  const double two_gamma = 2.0 * spec_.gamma;

  for (std::size_t n = 0; n < size; ++n) {
    const std::size_t rows = hermitian ? n + 1 : size;
    Complex* o = out.col(static_cast<Eigen::Index>(n)).data();
    const Complex* rho_n = rho.col(static_cast<Eigen::Index>(n)).data();

    // -i (e_m - e_n) - gamma (N_m + N_n)
    const double loss_n = sec.loss[n], energy_n = sec.energy[n];
    for (std::size_t m = 0; m < rows; ++m) {
      const double re = -(sec.loss[m] + loss_n), im = -(sec.energy[m] - energy_n);
      const double x = rho_n[m].real(), y = rho_n[m].imag();
      o[m] = Complex(re * x - im * y, re * y + im * x);
    }

    // +i rho K, column n of K equals row n by symmetry.
    double* __restrict od = reinterpret_cast<double*>(o);
    for (std::size_t j = sec.row_ptr[n]; j < sec.row_ptr[n + 1]; ++j) {
      const double w = k[j];
      const double* __restrict src =
          reinterpret_cast<const double*>(rho.col(static_cast<Eigen::Index>(sec.col[j])).data());
      for (std::size_t m = 0; m < rows; ++m) {
        const double re = src[2 * m], im = src[2 * m + 1];
        od[2 * m] -= w * im;
        od[2 * m + 1] += w * re;
      }
    }

    // -i K rho
    for (std::size_t m = 0; m < rows; ++m) {
      double re = 0.0, im = 0.0;
      for (std::size_t j = sec.row_ptr[m]; j < sec.row_ptr[m + 1]; ++j) {
        const Complex v = rho_n[sec.col[j]];
        re += k[j] * v.real();
        im += k[j] * v.imag();
      }
      od[2 * m] += im;
      od[2 * m + 1] -= re;
    }

    if (two_gamma == 0.0) continue;
    // 2 gamma a_i rho a_i^+ pulls from the sector one photon up.
    for (const Jump& jump : sec.jumps) {
      if (jump.target < 0 || jump.up[n] < 0) continue;
      const DenseMatrix& src = in[static_cast<std::size_t>(jump.target)];
      const Complex* col = src.col(jump.up[n]).data();
      const double cn = two_gamma * jump.coeff[n];
      for (std::size_t m = 0; m < rows; ++m) {
        if (jump.up[m] >= 0) o[m] += (cn * jump.coeff[m]) * col[jump.up[m]];
      }
    }
  }

  if (hermitian) {
    for (std::size_t n = 0; n < size; ++n) {
      const auto ni = static_cast<Eigen::Index>(n);
      out(ni, ni) = Complex(out(ni, ni).real(), 0.0);
      for (std::size_t m = 0; m < n; ++m) {
        out(ni, static_cast<Eigen::Index>(m)) = std::conj(out(static_cast<Eigen::Index>(m), ni));
      }
    }
  }
}

}  // namespace fwm
