#pragma once
#include <cstdint>
#include <vector>

namespace fbmre {

// Thin wrapper over FFTW for the two transforms the samplers need. Plan
// creation is serialized internally (FFTW plan creation is not thread-safe);
// execution runs concurrently on caller-owned buffers.
namespace fft {

// Forward real-to-halfcomplex DFT of size M: out[k] (k = 0..M/2) is the real
// part only meaningful for symmetric input; used to get circulant
// eigenvalues. out must have M/2+1 entries (real parts).
void real_symmetric_dft(const std::vector<double>& in, std::vector<double>& out_real);

// Unnormalized halfcomplex-to-real inverse DFT of size M:
// out[j] = sum_k spec[k] e^{+2 pi i jk/M} with Hermitian symmetry implied.
// spec holds M/2+1 complex entries interleaved (re, im). Contents of spec are
// destroyed. out must have M entries.
class InverseTransform {
public:
    explicit InverseTransform(std::int64_t size_m);
    ~InverseTransform();
    InverseTransform(const InverseTransform&) = delete;
    InverseTransform& operator=(const InverseTransform&) = delete;

    std::int64_t size() const { return m_; }
    // Interleaved half-spectrum buffer, (M/2+1) complex values.
    double* spectrum() { return spec_; }
    const double* output() const { return out_; }
    void execute();

private:
    std::int64_t m_;
    double* spec_;
    double* out_;
    void* plan_;
};

} // namespace fft
} // namespace fbmre
