#include "lsg/fourier.hpp"

#include "lsg/error.hpp"

#include <Eigen/Dense>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace lsg {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer allocate(std::size_t n) { return FftwBuffer(fftw_alloc_complex(n)); }

// Parity of the sum of axis indices of a flat row-major index, optionally
// shifted by N/2 per axis.
double checkerboard(std::size_t index, int n, int rank, int shift) {
  long total = 0;
  for (int a = 0; a < rank; ++a) {
    total += static_cast<long>(index % static_cast<std::size_t>(n)) - shift;
    index /= static_cast<std::size_t>(n);
  }
  return (total % 2 == 0) ? 1.0 : -1.0;
}

std::vector<cplx> run_fft(const RadialGrid& grid, std::span<const cplx> values, int direction, int pre_shift,
                          int post_shift, double scale) {
  const std::size_t count = grid.node_count();
  if (values.size() != count) fail(ErrorCode::DimensionError, "fft: value count does not match grid");
  const int n = grid.points_per_axis();
  const int rank = grid.rank();
  auto in = allocate(count);
  auto out = allocate(count);
  std::vector<int> dims(static_cast<std::size_t>(rank), n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(rank, dims.data(), in.get(), out.get(), direction, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const cplx v = values[i] * checkerboard(i, n, rank, pre_shift);
    in[i][0] = v.real();
    in[i][1] = v.imag();
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<cplx> result(count);
  for (std::size_t i = 0; i < count; ++i) {
    result[i] = cplx(out[i][0], out[i][1]) * (scale * checkerboard(i, n, rank, post_shift));
  }
  return result;
}

constexpr double kNegligibleWeight = 1e-18;

}  // namespace

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LSG_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

std::vector<cplx> centered_forward(const RadialGrid& grid, std::span<const cplx> values) {
  const int n = grid.points_per_axis();
  return run_fft(grid, values, FFTW_FORWARD, 0, n / 2, grid.cell_volume());
}

std::vector<cplx> centered_inverse(const RadialGrid& grid, std::span<const cplx> spectrum) {
  const int n = grid.points_per_axis();
  const double scale = std::pow(1.0 / (2.0 * grid.half_width()), grid.rank());
  return run_fft(grid, spectrum, FFTW_BACKWARD, n / 2, 0, scale);
}

std::vector<cplx> plane_wave_sum(const RadialGrid& grid, std::span<const double> wave_vectors,
                                 std::span<const cplx> weights, int sign) {
  const int rank = grid.rank();
  const std::size_t terms = weights.size();
  if (wave_vectors.size() != terms * static_cast<std::size_t>(rank)) {
    fail(ErrorCode::DimensionError, "plane_wave_sum: wave vector count does not match weights");
  }
  const double cutoff = kNegligibleWeight * max_abs(weights);
  std::vector<std::size_t> active;
  active.reserve(terms);
  for (std::size_t j = 0; j < terms; ++j) {
    if (std::abs(weights[j]) > cutoff) active.push_back(j);
  }

  const int n = grid.points_per_axis();
  const std::vector<double> y = grid.axis_coordinates();
  const double s = static_cast<double>(sign);
  std::vector<cplx> out(grid.node_count(), cplx(0.0, 0.0));
  if (active.empty()) return out;

  constexpr std::size_t kBlock = 2048;
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));

  if (rank == 1 || rank == 2) {
    const int cols = rank == 2 ? n : 1;
    auto rows_job = [&](int row_begin, int row_end) {
      const int rows = row_end - row_begin;
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows, cols);
      Eigen::MatrixXcd a(rows, static_cast<Eigen::Index>(kBlock));
      Eigen::MatrixXcd b(cols, static_cast<Eigen::Index>(kBlock));
      for (std::size_t start = 0; start < active.size(); start += kBlock) {
        const auto width = static_cast<Eigen::Index>(std::min(kBlock, active.size() - start));
        for (Eigen::Index c = 0; c < width; ++c) {
          const std::size_t j = active[start + static_cast<std::size_t>(c)];
          const double k0 = wave_vectors[j * static_cast<std::size_t>(rank)];
          for (int r = 0; r < rows; ++r) {
            const double phase = s * k0 * y[static_cast<std::size_t>(row_begin + r)];
            a(r, c) = weights[j] * cplx(std::cos(phase), std::sin(phase));
          }
          if (rank == 2) {
            const double k1 = wave_vectors[j * 2 + 1];
            for (int q = 0; q < n; ++q) {
              const double phase = s * k1 * y[static_cast<std::size_t>(q)];
              b(q, c) = cplx(std::cos(phase), std::sin(phase));
            }
          } else {
            b(0, c) = cplx(1.0, 0.0);
          }
        }
        acc.noalias() += a.leftCols(width) * b.leftCols(width).transpose();
      }
      for (int r = 0; r < rows; ++r) {
        for (int q = 0; q < cols; ++q) {
          out[static_cast<std::size_t>(row_begin + r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(q)] =
              acc(r, q);
        }
      }
    };
    if (workers <= 1) {
      rows_job(0, n);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (n + static_cast<int>(workers) - 1) / static_cast<int>(workers);
      for (int begin = 0; begin < n; begin += chunk) pool.emplace_back(rows_job, begin, std::min(n, begin + chunk));
      for (auto& t : pool) t.join();
    }
    return out;
  }

  // Higher rank: accumulate separable outer products term by term.
  std::vector<std::vector<cplx>> axis(static_cast<std::size_t>(rank), std::vector<cplx>(static_cast<std::size_t>(n)));
  for (std::size_t j : active) {
    for (int a = 0; a < rank; ++a) {
      const double k = wave_vectors[j * static_cast<std::size_t>(rank) + static_cast<std::size_t>(a)];
      for (int q = 0; q < n; ++q) {
        const double phase = s * k * y[static_cast<std::size_t>(q)];
        axis[static_cast<std::size_t>(a)][static_cast<std::size_t>(q)] = cplx(std::cos(phase), std::sin(phase));
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::size_t rem = i;
      cplx term = weights[j];
      for (int a = rank - 1; a >= 0; --a) {
        term *= axis[static_cast<std::size_t>(a)][rem % static_cast<std::size_t>(n)];
        rem /= static_cast<std::size_t>(n);
      }
      out[i] += term;
    }
  }
  return out;
}

std::vector<cplx> plane_wave_sum_at(int rank, std::span<const double> points, std::span<const double> wave_vectors,
                                    std::span<const cplx> weights, int sign) {
  const std::size_t terms = weights.size();
  const std::size_t npts = points.size() / static_cast<std::size_t>(rank);
  std::vector<cplx> out(npts, cplx(0.0, 0.0));
  const double s = static_cast<double>(sign);
  for (std::size_t p = 0; p < npts; ++p) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < terms; ++j) {
      if (weights[j] == cplx(0.0, 0.0)) continue;
      double phase = 0.0;
      for (int a = 0; a < rank; ++a) {
        phase += wave_vectors[j * static_cast<std::size_t>(rank) + static_cast<std::size_t>(a)] *
                 points[p * static_cast<std::size_t>(rank) + static_cast<std::size_t>(a)];
      }
      phase *= s;
      acc += weights[j] * cplx(std::cos(phase), std::sin(phase));
    }
    out[p] = acc;
  }
  return out;
}

}  // namespace lsg
