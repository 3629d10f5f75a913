#ifndef DGADAPT_TYPES_HPP
#define DGADAPT_TYPES_HPP

#include <Eigen/Core>
#include <Eigen/Sparse>

namespace dgadapt {

using Real = double;
using Index = int;

using Vector2 = Eigen::Matrix<Real, 2, 1>;
using Matrix2 = Eigen::Matrix<Real, 2, 2>;
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

// Compressed sparse row storage; all solver entry points expect compressed form
// (sorted column indices per row, no duplicates).
using SparseMat = Eigen::SparseMatrix<Real, Eigen::RowMajor, Index>;
using Triplet = Eigen::Triplet<Real, Index>;

}  // namespace dgadapt

#endif
