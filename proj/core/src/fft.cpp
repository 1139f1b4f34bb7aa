#include "glare/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "glare/errors.hpp"

namespace glare {

namespace {

// Plans are cached per (h, w, direction). FFTW_UNALIGNED lets one plan
// serve any buffer; execution of a plan is thread-safe, planning is not.
class PlanCache {
public:
    fftw_plan get(int w, int h, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(w, h, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(w) * h);
        fftw_plan plan = fftw_plan_dft_2d(
            h, w,
            reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()),
            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

std::vector<std::complex<double>> fft2(const std::vector<double>& data, int w, int h) {
    if (data.size() != static_cast<std::size_t>(w) * h)
        throw ArgumentError("fft2: buffer size does not match dimensions");
    std::vector<std::complex<double>> buf(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) buf[i] = data[i];
    fftw_plan plan = cache().get(w, h, FFTW_FORWARD);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    return buf;
}

std::vector<double> ifft2_real(const std::vector<std::complex<double>>& spec, int w, int h) {
    if (spec.size() != static_cast<std::size_t>(w) * h)
        throw ArgumentError("ifft2_real: buffer size does not match dimensions");
    std::vector<std::complex<double>> buf(spec);
    fftw_plan plan = cache().get(w, h, FFTW_BACKWARD);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(buf.data()));
    std::vector<double> res(spec.size());
    const double norm = 1.0 / (static_cast<double>(w) * h);
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = buf[i].real() * norm;
    return res;
}

}  // namespace glare
