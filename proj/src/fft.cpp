#include "dirmax/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dirmax {
namespace {

// Only fftw_execute is thread safe; planning and destruction are not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan p = nullptr;
  explicit Plan(fftw_plan q) : p(q) {
    if (!p) throw std::runtime_error("FFTW plan creation failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

template <class T>
struct Buffer {
  T* data;
  explicit Buffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))) {
    if (!data) throw std::bad_alloc();
  }
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
};

void check_dims(std::size_t n, int nx, int ny) {
  if (nx <= 0 || ny <= 0 || n != static_cast<std::size_t>(nx) * ny)
    throw std::invalid_argument("fft: size does not match dimensions");
}

std::vector<cplx> complex_transform(const std::vector<cplx>& in, int nx, int ny, int sign) {
  check_dims(in.size(), nx, ny);
  Buffer<fftw_complex> buf(in.size());
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_2d(ny, nx, buf.data, buf.data, sign, FFTW_ESTIMATE));
  }
  std::memcpy(buf.data, in.data(), sizeof(fftw_complex) * in.size());
  fftw_execute(plan->p);
  std::vector<cplx> out(in.size());
  std::memcpy(static_cast<void*>(out.data()), buf.data, sizeof(fftw_complex) * in.size());
  return out;
}

}  // namespace

std::vector<cplx> rfft2(const std::vector<double>& in, int nx, int ny) {
  check_dims(in.size(), nx, ny);
  const std::size_t nh = static_cast<std::size_t>(nx / 2 + 1) * ny;
  Buffer<double> rin(in.size());
  Buffer<fftw_complex> cout(nh);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = std::make_unique<Plan>(fftw_plan_dft_r2c_2d(ny, nx, rin.data, cout.data, FFTW_ESTIMATE));
  }
  std::memcpy(rin.data, in.data(), sizeof(double) * in.size());
  fftw_execute(plan->p);
  std::vector<cplx> out(nh);
  std::memcpy(static_cast<void*>(out.data()), cout.data, sizeof(fftw_complex) * nh);
  return out;
}

std::vector<double> irfft2(const std::vector<cplx>& in, int nx, int ny) {
  const std::size_t nh = static_cast<std::size_t>(nx / 2 + 1) * ny;
  if (nx <= 0 || ny <= 0 || in.size() != nh) throw std::invalid_argument("irfft2: size mismatch");
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  Buffer<fftw_complex> cin(nh);
  Buffer<double> rout(n);
  std::unique_ptr<Plan> plan;
  {
    std::lock_guard lock(planner_mutex());
    // c2r destroys its input; the copy below is made after planning.
    plan = std::make_unique<Plan>(fftw_plan_dft_c2r_2d(ny, nx, cin.data, rout.data, FFTW_ESTIMATE));
  }
  std::memcpy(cin.data, in.data(), sizeof(fftw_complex) * nh);
  fftw_execute(plan->p);
  std::vector<double> out(rout.data, rout.data + n);
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<cplx> fft2(const std::vector<cplx>& in, int nx, int ny) {
  return complex_transform(in, nx, ny, FFTW_FORWARD);
}

std::vector<cplx> ifft2(const std::vector<cplx>& in, int nx, int ny) {
  auto out = complex_transform(in, nx, ny, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(nx) * ny);
  for (auto& v : out) v *= scale;
  return out;
}

double bin_frequency(int k, int n, double h) {
  const int m = k <= n / 2 ? k : k - n;
  return 2.0 * std::numbers::pi * m / (n * h);
}

}  // namespace dirmax
