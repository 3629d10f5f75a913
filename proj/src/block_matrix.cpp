#include "dgadapt/block_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgadapt {

BlockSparseMatrix::BlockSparseMatrix(const Mesh& mesh, int block_size)
    : block_size_(block_size) {
  const Index n = mesh.num_triangles();
  std::vector<std::vector<Index>> cols(n);
  for (Index t = 0; t < n; ++t) cols[t].push_back(t);
  for (const Edge& e : mesh.edges) {
    if (e.boundary()) continue;
    cols[e.tri[0]].push_back(e.tri[1]);
    cols[e.tri[1]].push_back(e.tri[0]);
  }
  row_ptr_.resize(n + 1);
  row_ptr_[0] = 0;
  for (Index t = 0; t < n; ++t) {
    std::sort(cols[t].begin(), cols[t].end());
    row_ptr_[t + 1] = row_ptr_[t] + static_cast<Index>(cols[t].size());
    col_idx_.insert(col_idx_.end(), cols[t].begin(), cols[t].end());
  }
  blocks_.assign(col_idx_.size(), MatrixX::Zero(block_size_, block_size_));
}

BlockSparseMatrix BlockSparseMatrix::diagonal(Index block_rows, int block_size) {
  BlockSparseMatrix m;
  m.block_size_ = block_size;
  m.row_ptr_.resize(block_rows + 1);
  m.col_idx_.resize(block_rows);
  for (Index i = 0; i <= block_rows; ++i) m.row_ptr_[i] = i;
  for (Index i = 0; i < block_rows; ++i) m.col_idx_[i] = i;
  m.blocks_.assign(block_rows, MatrixX::Zero(block_size, block_size));
  return m;
}

MatrixX& BlockSparseMatrix::block(Index i, Index j) {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) throw std::logic_error("BlockSparseMatrix: block outside pattern");
  return blocks_[it - col_idx_.begin()];
}

const MatrixX* BlockSparseMatrix::find(Index i, Index j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return nullptr;
  return &blocks_[it - col_idx_.begin()];
}

void BlockSparseMatrix::set_zero() {
  for (auto& b : blocks_) b.setZero();
}

void BlockSparseMatrix::add(const BlockSparseMatrix& other, Real scale) {
  if (other.block_size_ != block_size_)
    throw std::invalid_argument("BlockSparseMatrix::add: block size mismatch");
  for (Index i = 0; i < other.block_rows(); ++i)
    for (Index k = other.row_ptr_[i]; k < other.row_ptr_[i + 1]; ++k)
      block(i, other.col_idx_[k]) += scale * other.blocks_[k];
}

SparseMat BlockSparseMatrix::to_csr() const {
  std::vector<Triplet> triplets;
  triplets.reserve(blocks_.size() * block_size_ * block_size_);
  for (Index i = 0; i < block_rows(); ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const Index j = col_idx_[k];
      const MatrixX& b = blocks_[k];
      for (int r = 0; r < block_size_; ++r) {
        for (int c = 0; c < block_size_; ++c) {
          const Index gr = i * block_size_ + r;
          const Index gc = j * block_size_ + c;
          if (b(r, c) != 0.0 || gr == gc) triplets.emplace_back(gr, gc, b(r, c));
        }
      }
    }
  }
  SparseMat out(rows(), rows());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

VectorX BlockSparseMatrix::multiply(const VectorX& x) const {
  if (x.size() != rows()) throw std::invalid_argument("BlockSparseMatrix: dimension mismatch");
  VectorX y = VectorX::Zero(rows());
  for (Index i = 0; i < block_rows(); ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      y.segment(i * block_size_, block_size_) +=
          blocks_[k] * x.segment(col_idx_[k] * block_size_, block_size_);
  return y;
}

}  // namespace dgadapt
