#include "filament/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace filament::transform {

int next_fast_size(int n) {
    if (n < 1) n = 1;
    for (;; ++n) {
        int m = n;
        for (int f : {2, 3, 5})
            while (m % f == 0) m /= f;
        if (m == 1) return n;
    }
}

namespace {

// Plans are cached per shape and reused through the new-array interface.
// FFTW_UNALIGNED keeps them valid for any caller buffer; FFTW_ESTIMATE keeps
// planning deterministic.
class PlanCache {
  public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
        fftw_cleanup();
    }

    fftw_plan get(int nt, int ns, int sign) {
        std::scoped_lock lock(mutex_);
        const Key key{nt, ns, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> scratch(static_cast<size_t>(nt) * ns);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = (ns == 0)
            ? fftw_plan_dft_1d(nt, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED)
            : fftw_plan_dft_2d(nt, ns, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    using Key = std::tuple<int, int, int>;
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(std::vector<std::complex<double>>& data, int nt, int ns, int sign) {
    const size_t need = static_cast<size_t>(nt) * (ns == 0 ? 1 : ns);
    if (data.size() != need) throw std::invalid_argument("transform: size mismatch");
    fftw_plan plan = cache().get(nt, ns, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void backward_2d(std::vector<std::complex<double>>& data, int nt, int ns) {
    execute(data, nt, ns, FFTW_BACKWARD);
}

void forward_2d(std::vector<std::complex<double>>& data, int nt, int ns) {
    execute(data, nt, ns, FFTW_FORWARD);
    const double scale = 1.0 / (static_cast<double>(nt) * ns);
    for (auto& v : data) v *= scale;
}

void backward_1d(std::vector<std::complex<double>>& data, int n) {
    execute(data, n, 0, FFTW_BACKWARD);
}

void forward_1d(std::vector<std::complex<double>>& data, int n) {
    execute(data, n, 0, FFTW_FORWARD);
    const double scale = 1.0 / n;
    for (auto& v : data) v *= scale;
}

}  // namespace filament::transform
