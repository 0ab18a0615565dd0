// AVX2 variants, four doubles per lane group. Remainders fall through to the
// scalar reference. Built with -mavx2 and -ffp-contract=off so no FMA is
// formed and results match the scalar path bit for bit.

#include <immintrin.h>

#include <cassert>

#include "ladder/kernels/kernels.hpp"

namespace ladder::kernels::avx2 {
namespace {

struct Cx {
    __m256d re;
    __m256d im;
};

inline Cx add(Cx a, Cx b) { return {_mm256_add_pd(a.re, b.re), _mm256_add_pd(a.im, b.im)}; }
inline Cx sub(Cx a, Cx b) { return {_mm256_sub_pd(a.re, b.re), _mm256_sub_pd(a.im, b.im)}; }
inline Cx mul(Cx a, Cx b) {
    return {_mm256_sub_pd(_mm256_mul_pd(a.re, b.re), _mm256_mul_pd(a.im, b.im)),
            _mm256_add_pd(_mm256_mul_pd(a.re, b.im), _mm256_mul_pd(a.im, b.re))};
}
inline Cx scale(__m256d s, Cx a) { return {_mm256_mul_pd(s, a.re), _mm256_mul_pd(s, a.im)}; }
inline __m256d negate(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }
inline Cx conj(Cx a) { return {a.re, negate(a.im)}; }
inline Cx inv(Cx a) {
    const __m256d n = _mm256_add_pd(_mm256_mul_pd(a.re, a.re), _mm256_mul_pd(a.im, a.im));
    return {_mm256_div_pd(a.re, n), _mm256_div_pd(negate(a.im), n)};
}
inline Cx add_one(Cx a) { return {_mm256_add_pd(_mm256_set1_pd(1.0), a.re), a.im}; }
inline __m256d abs2(Cx a) {
    return _mm256_add_pd(_mm256_mul_pd(a.re, a.re), _mm256_mul_pd(a.im, a.im));
}

inline __m256d load(const std::vector<double>& v, std::size_t i) { return _mm256_loadu_pd(v.data() + i); }
inline void store(std::vector<double>& v, std::size_t i, __m256d x) { _mm256_storeu_pd(v.data() + i, x); }

}  // namespace

void amplitudes(AmplitudeBatch& b, std::size_t begin, std::size_t end) {
    assert(end <= b.size());
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = begin;
    for (; i + 4 <= end; i += 4) {
        const Cx zl{load(b.zl_re, i), load(b.zl_im, i)};
        const Cx zr{load(b.zr_re, i), load(b.zr_im, i)};
        const Cx w{load(b.flux_re, i), load(b.flux_im, i)};
        const __m256d xi = load(b.xi, i);
        const __m256d g = load(b.coupling_ratio, i);

        const Cx izl = inv(zl);
        const Cx izr = inv(zr);
        const Cx a_l = sub(zl, izl);
        const Cx a_r = sub(zr, izr);
        const Cx p = mul(zl, w);
        const Cx q = mul(zr, conj(w));
        const Cx m = mul(p, izr);
        const Cx m_inv = mul(q, izl);

        const Cx left = sub(a_l, scale(xi, p));
        const Cx right = sub(a_r, scale(xi, q));
        const Cx loop = mul(add_one(m_inv), add_one(m));
        const Cx d = sub(mul(left, right), scale(xi, loop));
        const Cx id = inv(d);

        const Cx t_ll = mul(mul(a_l, right), id);
        const Cx neg_al = {negate(a_l.re), negate(a_l.im)};
        const Cx t_rl = scale(g, mul(mul(neg_al, add_one(m)), id));

        const Cx two_cos_l = add(zl, izl);
        const Cx r_inner = add(scale(_mm256_sub_pd(_mm256_mul_pd(two, w.re), xi), zr), two_cos_l);
        const Cx r_ll = scale(xi, mul(mul(zl, r_inner), id));

        const Cx wx = {_mm256_sub_pd(w.re, xi), w.im};
        const Cx r_rl = scale(g, mul(mul(neg_al, add_one(mul(wx, mul(zl, zr)))), id));

        store(b.t_ll_re, i, t_ll.re);
        store(b.t_ll_im, i, t_ll.im);
        store(b.r_ll_re, i, r_ll.re);
        store(b.r_ll_im, i, r_ll.im);
        store(b.t_rl_re, i, t_rl.re);
        store(b.t_rl_im, i, t_rl.im);
        store(b.r_rl_re, i, r_rl.re);
        store(b.r_rl_im, i, r_rl.im);
        store(b.d_re, i, d.re);
        store(b.d_im, i, d.im);

        const __m256d tw = load(b.transfer_weight, i);
        const __m256d raw_t_ll = abs2(t_ll);
        const __m256d raw_r_ll = abs2(r_ll);
        const __m256d raw_t_rl = abs2(t_rl);
        const __m256d raw_r_rl = abs2(r_rl);
        store(b.raw_t_ll, i, raw_t_ll);
        store(b.raw_r_ll, i, raw_r_ll);
        store(b.raw_t_rl, i, raw_t_rl);
        store(b.raw_r_rl, i, raw_r_rl);
        store(b.flow_t_ll, i, raw_t_ll);
        store(b.flow_r_ll, i, raw_r_ll);
        store(b.flow_t_rl, i, _mm256_mul_pd(raw_t_rl, tw));
        store(b.flow_r_rl, i, _mm256_mul_pd(raw_r_rl, tw));
    }
    if (i < end) {
        scalar::amplitudes(b, i, end);
    }
}

void chain_rhs(std::span<const double> re, std::span<const double> im, double onsite, double hop,
               double h, std::span<double> out_re, std::span<double> out_im) {
    const std::size_t n = re.size();
    assert(im.size() == n && out_re.size() == n && out_im.size() == n);
    if (n < 6) {
        scalar::chain_rhs(re, im, onsite, hop, h, out_re, out_im);
        return;
    }

    auto edge = [&](std::size_t i) {
        const double re_nb = (i > 0 ? re[i - 1] : 0.0) + (i + 1 < n ? re[i + 1] : 0.0);
        const double im_nb = (i > 0 ? im[i - 1] : 0.0) + (i + 1 < n ? im[i + 1] : 0.0);
        const double h_re = onsite * re[i] - hop * re_nb;
        const double h_im = onsite * im[i] - hop * im_nb;
        out_re[i] = re[i] + h * h_im;
        out_im[i] = im[i] - h * h_re;
    };

    edge(0);
    const __m256d vo = _mm256_set1_pd(onsite);
    const __m256d vj = _mm256_set1_pd(hop);
    const __m256d vh = _mm256_set1_pd(h);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d r = _mm256_loadu_pd(re.data() + i);
        const __m256d m = _mm256_loadu_pd(im.data() + i);
        const __m256d r_nb = _mm256_add_pd(_mm256_loadu_pd(re.data() + i - 1),
                                           _mm256_loadu_pd(re.data() + i + 1));
        const __m256d m_nb = _mm256_add_pd(_mm256_loadu_pd(im.data() + i - 1),
                                           _mm256_loadu_pd(im.data() + i + 1));
        const __m256d h_re = _mm256_sub_pd(_mm256_mul_pd(vo, r), _mm256_mul_pd(vj, r_nb));
        const __m256d h_im = _mm256_sub_pd(_mm256_mul_pd(vo, m), _mm256_mul_pd(vj, m_nb));
        _mm256_storeu_pd(out_re.data() + i, _mm256_add_pd(r, _mm256_mul_pd(vh, h_im)));
        _mm256_storeu_pd(out_im.data() + i, _mm256_sub_pd(m, _mm256_mul_pd(vh, h_re)));
    }
    for (; i < n; ++i) {
        edge(i);
    }
}

double norm_sq(std::span<const double> re, std::span<const double> im) {
    const std::size_t n = re.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(re.data() + i);
        const __m256d m = _mm256_loadu_pd(im.data() + i);
        acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        sum += re[i] * re[i] + im[i] * im[i];
    }
    return sum;
}

}  // namespace ladder::kernels::avx2
