#pragma once

// Dense node/coefficient kernels behind the DFT, adjoint DFT and Gram assembly.
//
// Every kernel has a serial reference and an OpenMP version. The parallel
// versions split work over output entries only, and each output entry is
// accumulated in the same order as the serial loop, so both produce
// bit-identical results for any thread count.

#include <cstddef>
#include <span>
#include <vector>

#include "framelet/basis.hpp"

namespace framelet {

enum class ExecPolicy { serial, parallel };

namespace kernels {

/// Row-major table of unweighted basis values P_i(x_k), i < spectral_dim(cutoff).
class BasisTable {
 public:
  BasisTable() = default;
  BasisTable(std::span<const SimplexPoint> nodes, int cutoff, ExecPolicy policy);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] int cutoff() const { return cutoff_; }
  [[nodiscard]] std::span<const double> row(std::size_t k) const {
    return {data_.data() + k * cols_, cols_};
  }
  [[nodiscard]] double operator()(std::size_t k, std::size_t i) const { return data_[k * cols_ + i]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int cutoff_ = -1;
  std::vector<double> data_;
};

// out_k = sqrt_w_k * sum_{i < coeffs.size()} P_i(x_k) coeffs_i
void serial_synthesize(const BasisTable& table, std::span<const double> sqrt_w,
                       std::span<const Complex> coeffs, std::span<Complex> out);
void parallel_synthesize(const BasisTable& table, std::span<const double> sqrt_w,
                         std::span<const Complex> coeffs, std::span<Complex> out);

// out_i = sum_k sqrt_w_k P_i(x_k) values_k, for i < out.size()
void serial_adjoint(const BasisTable& table, std::span<const double> sqrt_w,
                    std::span<const Complex> values, std::span<Complex> out);
void parallel_adjoint(const BasisTable& table, std::span<const double> sqrt_w,
                      std::span<const Complex> values, std::span<Complex> out);

// Table-free variants that evaluate the basis per node; used when a table would be too large.
void serial_synthesize_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                              int cutoff, std::span<const Complex> coeffs, std::span<Complex> out);
void parallel_synthesize_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                                int cutoff, std::span<const Complex> coeffs, std::span<Complex> out);
void serial_adjoint_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                           int cutoff, std::span<const Complex> values, std::span<Complex> out);
void parallel_adjoint_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                             int cutoff, std::span<const Complex> values, std::span<Complex> out);

// Row-major dim x dim matrix U_{i,i'} = sum_k w_k P_i(x_k) P_{i'}(x_k).
void serial_gram(const BasisTable& table, std::span<const double> w, std::span<double> out);
void parallel_gram(const BasisTable& table, std::span<const double> w, std::span<double> out);

// Policy dispatch.
void synthesize(ExecPolicy policy, const BasisTable& table, std::span<const double> sqrt_w,
                std::span<const Complex> coeffs, std::span<Complex> out);
void adjoint(ExecPolicy policy, const BasisTable& table, std::span<const double> sqrt_w,
             std::span<const Complex> values, std::span<Complex> out);
void synthesize_direct(ExecPolicy policy, std::span<const SimplexPoint> nodes,
                       std::span<const double> sqrt_w, int cutoff, std::span<const Complex> coeffs,
                       std::span<Complex> out);
void adjoint_direct(ExecPolicy policy, std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                    int cutoff, std::span<const Complex> values, std::span<Complex> out);
void gram(ExecPolicy policy, const BasisTable& table, std::span<const double> w, std::span<double> out);

}  // namespace kernels
}  // namespace framelet
