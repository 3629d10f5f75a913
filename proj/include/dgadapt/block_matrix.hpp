#ifndef DGADAPT_BLOCK_MATRIX_HPP
#define DGADAPT_BLOCK_MATRIX_HPP

#include <vector>

#include "dgadapt/mesh.hpp"
#include "dgadapt/types.hpp"

namespace dgadapt {

/// Nel x Nel grid of dense blocks, one block row per triangle. A block
/// (i, j) exists only for i = j or triangles sharing an edge, which is
/// exactly the coupling pattern of a DG bilinear form.
class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;

  /// Pattern with diagonal blocks plus one block per interior-edge neighbor pair.
  BlockSparseMatrix(const Mesh& mesh, int block_size);

  /// Diagonal-only pattern (volume coupling, e.g. reaction Jacobians).
  static BlockSparseMatrix diagonal(Index block_rows, int block_size);

  int block_size() const { return block_size_; }
  Index block_rows() const { return static_cast<Index>(row_ptr_.size()) - 1; }
  Index rows() const { return block_rows() * block_size_; }
  Index stored_blocks() const { return static_cast<Index>(col_idx_.size()); }

  MatrixX& block(Index i, Index j);
  const MatrixX* find(Index i, Index j) const;

  void set_zero();

  /// this += scale * other; other's pattern must be contained in this one's.
  void add(const BlockSparseMatrix& other, Real scale = 1.0);

  /// Flat compressed-row matrix with the same entries. Exact zeros inside
  /// blocks are pruned except on the global diagonal.
  SparseMat to_csr() const;

  VectorX multiply(const VectorX& x) const;

 private:
  int block_size_ = 0;
  std::vector<Index> row_ptr_;
  std::vector<Index> col_idx_;
  std::vector<MatrixX> blocks_;
};

}  // namespace dgadapt

#endif
