#include "qa/kernels.hpp"

#include "support.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

using namespace qa;
using kernels::cplx;
using kernels::KernelTable;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<const KernelTable*> tables() {
    std::vector<const KernelTable*> t{&kernels::scalar_table()};
    if (kernels::avx2_table()) t.push_back(kernels::avx2_table());
    return t;
}

const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 9, 16, 33, 1024};

}  // namespace

TEST_CASE("scalar fwht matches the character sum") {
    for (unsigned bits = 0; bits <= 8; ++bits) {
        const std::size_t n = std::size_t{1} << bits;
        const auto in = test::normal_vector(n, 11 + bits);
        auto out = in;
        kernels::scalar_table().fwht(out.data(), n);
        for (std::size_t z = 0; z < n; ++z) {
            double s = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                s += (std::popcount(m & z) % 2 ? -1.0 : 1.0) * in[m];
            }
            CHECK(out[z] == doctest::Approx(s).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("every kernel table matches the scalar reference") {
    const KernelTable& ref = kernels::scalar_table();
    for (const KernelTable* kt : tables()) {
        CAPTURE(kt->name);
        for (unsigned bits = 0; bits <= 12; ++bits) {
            const std::size_t n = std::size_t{1} << bits;
            auto a = test::normal_vector(n, 5 + bits);
            auto b = a;
            ref.fwht(a.data(), n);
            kt->fwht(b.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(std::abs(a[i] - b[i]) <= 1e-12 * std::sqrt(static_cast<double>(n)) * 4.0);
            }
        }
        for (std::size_t n : kSizes) {
            CAPTURE(n);
            const auto x = test::complex_vector(n, 100 + n);
            const auto y = test::complex_vector(n, 200 + n);
            const auto e = test::normal_vector(n, 300 + n);

            CHECK(std::abs(kt->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <=
                  1e-12 * static_cast<double>(n));
            CHECK(kt->norm2(x.data(), n) ==
                  doctest::Approx(ref.norm2(x.data(), n)).epsilon(1e-13));

            std::vector<cplx> w1(n), w2(n);
            for (double t : {0.0, 0.37, 25.0, 3.0e3}) {
                std::vector<double> energy(n);
                for (std::size_t i = 0; i < n; ++i) energy[i] = 40.0 * e[i];
                ref.phase_weights(energy.data(), t, x.data(), w1.data(), n);
                kt->phase_weights(energy.data(), t, x.data(), w2.data(), n);
                CHECK(max_abs_diff(w1, w2) <= 1e-13 * (1.0 + std::abs(t) * 40.0) * 10.0);
            }

            const cplx z{0.3, -1.7};
            ref.scale_conj(x.data(), z, w1.data(), n);
            kt->scale_conj(x.data(), z, w2.data(), n);
            CHECK(max_abs_diff(w1, w2) <= 1e-14 * 10.0);

            ref.diag_rhs(e.data(), x.data(), z, y.data(), w1.data(), n);
            kt->diag_rhs(e.data(), x.data(), z, y.data(), w2.data(), n);
            CHECK(max_abs_diff(w1, w2) <= 1e-13);

            const double c0[] = {0.1, -0.25, 0.7};
            const cplx* ks[] = {x.data(), y.data(), w1.data()};
            std::vector<cplx> o1(n), o2(n);
            ref.lincomb(o1.data(), y.data(), 0.01, c0, ks, 3, n);
            kt->lincomb(o2.data(), y.data(), 0.01, c0, ks, 3, n);
            CHECK(max_abs_diff(o1, o2) <= 1e-14 * 10.0);

            CHECK(kt->weighted_err2(x.data(), y.data(), o1.data(), 1e-10, 1e-8, n) ==
                  doctest::Approx(ref.weighted_err2(x.data(), y.data(), o1.data(), 1e-10, 1e-8, n))
                      .epsilon(1e-12));
        }
        for (unsigned q = 0; q <= 10; ++q) {
            const std::size_t n = std::size_t{1} << q;
            const auto x = test::complex_vector(n, 400 + q);
            const auto e = test::normal_vector(n, 500 + q);
            std::vector<cplx> o1(n), o2(n);
            ref.transverse_rhs(e.data(), x.data(), 0.8, o1.data(), q);
            kt->transverse_rhs(e.data(), x.data(), 0.8, o2.data(), q);
            CHECK(max_abs_diff(o1, o2) <= 1e-13);
        }
    }
}

TEST_CASE("phase weights follow the definition") {
    for (const KernelTable* kt : tables()) {
        CAPTURE(kt->name);
        const std::size_t n = 64;
        const auto u = test::complex_vector(n, 9);
        const auto e = test::normal_vector(n, 10);
        std::vector<cplx> w(n);
        const double t = 123.456;
        kt->phase_weights(e.data(), t, u.data(), w.data(), n);
        for (std::size_t k = 0; k < n; ++k) {
            const cplx expect = std::conj(u[k]) * std::polar(1.0, -e[k] * t);
            CHECK(std::abs(w[k] - expect) <= 1e-12);
        }
    }
}

TEST_CASE("transverse rhs is supported on single bit flips") {
    const unsigned q = 5;
    const std::size_t n = std::size_t{1} << q;
    const std::size_t z = 0b10110;
    std::vector<cplx> psi(n, 0.0);
    psi[z] = 1.0;
    std::vector<double> zero(n, 0.0);
    for (const KernelTable* kt : tables()) {
        std::vector<cplx> out(n);
        kt->transverse_rhs(zero.data(), psi.data(), 2.0, out.data(), q);
        for (std::size_t k = 0; k < n; ++k) {
            const bool neighbor = std::popcount(k ^ z) == 1;
            CHECK(out[k] == (neighbor ? cplx{0.0, 2.0} : cplx{0.0, 0.0}));
        }
    }
}

TEST_CASE("active table honours the environment override") {
    const KernelTable& active = kernels::active();
    CHECK((active.name == "scalar" || active.name == "avx2"));
}
