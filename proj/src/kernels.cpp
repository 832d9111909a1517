#include "framelet/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace framelet::kernels {
namespace {

constexpr std::size_t kColumnBlock = 64;
constexpr std::size_t kNodeChunk = 256;

void check_sizes(std::size_t rows, std::size_t cols, std::span<const double> sqrt_w,
                 std::size_t coeff_count, std::size_t value_count) {
  if (sqrt_w.size() != rows || value_count != rows) {
    throw std::invalid_argument("kernels: node count mismatch");
  }
  if (coeff_count > cols) throw std::invalid_argument("kernels: more coefficients than basis columns");
}

}  // namespace

BasisTable::BasisTable(std::span<const SimplexPoint> nodes, int cutoff, ExecPolicy policy)
    : rows_(nodes.size()), cols_(spectral_dim(cutoff)), cutoff_(cutoff), data_(rows_ * cols_) {
  const auto n = static_cast<std::ptrdiff_t>(rows_);
  if (policy == ExecPolicy::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      basis_eval_all(cutoff, nodes[static_cast<std::size_t>(k)],
                     {data_.data() + static_cast<std::size_t>(k) * cols_, cols_});
    }
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      basis_eval_all(cutoff, nodes[static_cast<std::size_t>(k)],
                     {data_.data() + static_cast<std::size_t>(k) * cols_, cols_});
    }
  }
}

void serial_synthesize(const BasisTable& table, std::span<const double> sqrt_w,
                       std::span<const Complex> coeffs, std::span<Complex> out) {
  check_sizes(table.rows(), table.cols(), sqrt_w, coeffs.size(), out.size());
  const std::size_t dim = coeffs.size();
  for (std::size_t k = 0; k < table.rows(); ++k) {
    const auto row = table.row(k);
    Complex acc{};
    for (std::size_t i = 0; i < dim; ++i) acc += row[i] * coeffs[i];
    out[k] = sqrt_w[k] * acc;
  }
}

void parallel_synthesize(const BasisTable& table, std::span<const double> sqrt_w,
                         std::span<const Complex> coeffs, std::span<Complex> out) {
  check_sizes(table.rows(), table.cols(), sqrt_w, coeffs.size(), out.size());
  const std::size_t dim = coeffs.size();
  const auto rows = static_cast<std::ptrdiff_t>(table.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < rows; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const auto row = table.row(k);
    Complex acc{};
    for (std::size_t i = 0; i < dim; ++i) acc += row[i] * coeffs[i];
    out[k] = sqrt_w[k] * acc;
  }
}

void serial_adjoint(const BasisTable& table, std::span<const double> sqrt_w,
                    std::span<const Complex> values, std::span<Complex> out) {
  check_sizes(table.rows(), table.cols(), sqrt_w, out.size(), values.size());
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t k = 0; k < table.rows(); ++k) {
    const auto row = table.row(k);
    const Complex s = sqrt_w[k] * values[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i] * s;
  }
}

void parallel_adjoint(const BasisTable& table, std::span<const double> sqrt_w,
                      std::span<const Complex> values, std::span<Complex> out) {
  check_sizes(table.rows(), table.cols(), sqrt_w, out.size(), values.size());
  std::fill(out.begin(), out.end(), Complex{});
  const std::size_t dim = out.size();
  const auto blocks = static_cast<std::ptrdiff_t>((dim + kColumnBlock - 1) / kColumnBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kColumnBlock;
    const std::size_t hi = std::min(dim, lo + kColumnBlock);
    for (std::size_t k = 0; k < table.rows(); ++k) {
      const auto row = table.row(k);
      const Complex s = sqrt_w[k] * values[k];
      for (std::size_t i = lo; i < hi; ++i) out[i] += row[i] * s;
    }
  }
}

void serial_synthesize_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                              int cutoff, std::span<const Complex> coeffs, std::span<Complex> out) {
  const std::size_t dim = spectral_dim(cutoff);
  check_sizes(nodes.size(), dim, sqrt_w, coeffs.size(), out.size());
  std::vector<double> basis(dim);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    basis_eval_all(cutoff, nodes[k], basis);
    Complex acc{};
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += basis[i] * coeffs[i];
    out[k] = sqrt_w[k] * acc;
  }
}

void parallel_synthesize_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                                int cutoff, std::span<const Complex> coeffs, std::span<Complex> out) {
  const std::size_t dim = spectral_dim(cutoff);
  check_sizes(nodes.size(), dim, sqrt_w, coeffs.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel
  {
    std::vector<double> basis(dim);
#pragma omp for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < n; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      basis_eval_all(cutoff, nodes[k], basis);
      Complex acc{};
      for (std::size_t i = 0; i < coeffs.size(); ++i) acc += basis[i] * coeffs[i];
      out[k] = sqrt_w[k] * acc;
    }
  }
}

void serial_adjoint_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                           int cutoff, std::span<const Complex> values, std::span<Complex> out) {
  const std::size_t dim = spectral_dim(cutoff);
  check_sizes(nodes.size(), dim, sqrt_w, out.size(), values.size());
  std::fill(out.begin(), out.end(), Complex{});
  std::vector<double> basis(dim);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    basis_eval_all(cutoff, nodes[k], basis);
    const Complex s = sqrt_w[k] * values[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += basis[i] * s;
  }
}

void parallel_adjoint_direct(std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                             int cutoff, std::span<const Complex> values, std::span<Complex> out) {
  const std::size_t dim = spectral_dim(cutoff);
  check_sizes(nodes.size(), dim, sqrt_w, out.size(), values.size());
  std::fill(out.begin(), out.end(), Complex{});
  const std::size_t used = out.size();
  const auto blocks = static_cast<std::ptrdiff_t>((used + kColumnBlock - 1) / kColumnBlock);
  std::vector<double> chunk(kNodeChunk * dim);

  // Evaluate a chunk of nodes in parallel, then accumulate it column-blockwise
  // in ascending node order.
  for (std::size_t start = 0; start < nodes.size(); start += kNodeChunk) {
    const std::size_t count = std::min(kNodeChunk, nodes.size() - start);
    const auto cn = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < cn; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      basis_eval_all(cutoff, nodes[start + cc], {chunk.data() + cc * dim, dim});
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kColumnBlock;
      const std::size_t hi = std::min(used, lo + kColumnBlock);
      for (std::size_t c = 0; c < count; ++c) {
        const double* row = chunk.data() + c * dim;
        const Complex s = sqrt_w[start + c] * values[start + c];
        for (std::size_t i = lo; i < hi; ++i) out[i] += row[i] * s;
      }
    }
  }
}

void serial_gram(const BasisTable& table, std::span<const double> w, std::span<double> out) {
  const std::size_t dim = table.cols();
  if (w.size() != table.rows() || out.size() != dim * dim) {
    throw std::invalid_argument("kernels::gram: size mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < table.rows(); ++k) {
    const auto row = table.row(k);
    for (std::size_t i = 0; i < dim; ++i) {
      const double wi = w[k] * row[i];
      double* dst = out.data() + i * dim;
      for (std::size_t ip = i; ip < dim; ++ip) dst[ip] += wi * row[ip];
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t ip = 0; ip < i; ++ip) out[i * dim + ip] = out[ip * dim + i];
  }
}

void parallel_gram(const BasisTable& table, std::span<const double> w, std::span<double> out) {
  const std::size_t dim = table.cols();
  if (w.size() != table.rows() || out.size() != dim * dim) {
    throw std::invalid_argument("kernels::gram: size mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  const auto d = static_cast<std::ptrdiff_t>(dim);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t ii = 0; ii < d; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* dst = out.data() + i * dim;
    for (std::size_t k = 0; k < table.rows(); ++k) {
      const auto row = table.row(k);
      const double wi = w[k] * row[i];
      for (std::size_t ip = i; ip < dim; ++ip) dst[ip] += wi * row[ip];
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t ip = 0; ip < i; ++ip) out[i * dim + ip] = out[ip * dim + i];
  }
}

void synthesize(ExecPolicy policy, const BasisTable& table, std::span<const double> sqrt_w,
                std::span<const Complex> coeffs, std::span<Complex> out) {
  if (policy == ExecPolicy::parallel) {
    parallel_synthesize(table, sqrt_w, coeffs, out);
  } else {
    serial_synthesize(table, sqrt_w, coeffs, out);
  }
}

void adjoint(ExecPolicy policy, const BasisTable& table, std::span<const double> sqrt_w,
             std::span<const Complex> values, std::span<Complex> out) {
  if (policy == ExecPolicy::parallel) {
    parallel_adjoint(table, sqrt_w, values, out);
  } else {
    serial_adjoint(table, sqrt_w, values, out);
  }
}

void synthesize_direct(ExecPolicy policy, std::span<const SimplexPoint> nodes,
                       std::span<const double> sqrt_w, int cutoff, std::span<const Complex> coeffs,
                       std::span<Complex> out) {
  if (policy == ExecPolicy::parallel) {
    parallel_synthesize_direct(nodes, sqrt_w, cutoff, coeffs, out);
  } else {
    serial_synthesize_direct(nodes, sqrt_w, cutoff, coeffs, out);
  }
}

void adjoint_direct(ExecPolicy policy, std::span<const SimplexPoint> nodes, std::span<const double> sqrt_w,
                    int cutoff, std::span<const Complex> values, std::span<Complex> out) {
  if (policy == ExecPolicy::parallel) {
    parallel_adjoint_direct(nodes, sqrt_w, cutoff, values, out);
  } else {
    serial_adjoint_direct(nodes, sqrt_w, cutoff, values, out);
  }
}

void gram(ExecPolicy policy, const BasisTable& table, std::span<const double> w, std::span<double> out) {
  if (policy == ExecPolicy::parallel) {
    parallel_gram(table, w, out);
  } else {
    serial_gram(table, w, out);
  }
}

}  // namespace framelet::kernels
