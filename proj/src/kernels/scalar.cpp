// Scalar reference kernels. The AVX2 variants in avx2.cpp mirror these
// operation for operation; keep the two in step.

#include <cassert>

#include "ladder/kernels/kernels.hpp"

namespace ladder::kernels {

void AmplitudeBatch::resize(std::size_t n) {
    for (auto* v : {&zl_re, &zl_im, &zr_re, &zr_im, &flux_re, &flux_im, &xi, &coupling_ratio,
                    &transfer_weight, &t_ll_re, &t_ll_im, &r_ll_re, &r_ll_im, &t_rl_re, &t_rl_im,
                    &r_rl_re, &r_rl_im, &d_re, &d_im, &raw_t_ll, &raw_r_ll, &raw_t_rl, &raw_r_rl,
                    &flow_t_ll, &flow_r_ll, &flow_t_rl, &flow_r_rl}) {
        v->resize(n);
    }
}

namespace scalar {
namespace {

struct Cx {
    double re;
    double im;
};

inline Cx add(Cx a, Cx b) { return {a.re + b.re, a.im + b.im}; }
inline Cx sub(Cx a, Cx b) { return {a.re - b.re, a.im - b.im}; }
inline Cx mul(Cx a, Cx b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline Cx scale(double s, Cx a) { return {s * a.re, s * a.im}; }
inline Cx conj(Cx a) { return {a.re, -a.im}; }
inline Cx inv(Cx a) {
    const double n = a.re * a.re + a.im * a.im;
    return {a.re / n, -a.im / n};
}
inline Cx add_one(Cx a) { return {1.0 + a.re, a.im}; }
inline double abs2(Cx a) { return a.re * a.re + a.im * a.im; }

}  // namespace

void amplitudes(AmplitudeBatch& b, std::size_t begin, std::size_t end) {
    assert(end <= b.size());
    for (std::size_t i = begin; i < end; ++i) {
        const Cx zl{b.zl_re[i], b.zl_im[i]};
        const Cx zr{b.zr_re[i], b.zr_im[i]};
        const Cx w{b.flux_re[i], b.flux_im[i]};
        const double xi = b.xi[i];
        const double g = b.coupling_ratio[i];

        const Cx izl = inv(zl);
        const Cx izr = inv(zr);
        const Cx a_l = sub(zl, izl);  // 2i sin k_L
        const Cx a_r = sub(zr, izr);  // 2i sin k_R
        const Cx p = mul(zl, w);      // e^{i(k_L + phi)}
        const Cx q = mul(zr, conj(w));  // e^{i(k_R - phi)}
        const Cx m = mul(p, izr);     // e^{i(k_L - k_R + phi)}
        const Cx m_inv = mul(q, izl);

        const Cx left = sub(a_l, scale(xi, p));
        const Cx right = sub(a_r, scale(xi, q));
        const Cx loop = mul(add_one(m_inv), add_one(m));
        const Cx d = sub(mul(left, right), scale(xi, loop));
        const Cx id = inv(d);

        const Cx t_ll = mul(mul(a_l, right), id);
        const Cx neg_al = {-a_l.re, -a_l.im};
        const Cx t_rl = scale(g, mul(mul(neg_al, add_one(m)), id));

        const Cx two_cos_l = add(zl, izl);
        const Cx r_inner = add(scale(2.0 * w.re - xi, zr), two_cos_l);
        const Cx r_ll = scale(xi, mul(mul(zl, r_inner), id));

        const Cx wx = {w.re - xi, w.im};
        const Cx r_rl = scale(g, mul(mul(neg_al, add_one(mul(wx, mul(zl, zr)))), id));

        b.t_ll_re[i] = t_ll.re;
        b.t_ll_im[i] = t_ll.im;
        b.r_ll_re[i] = r_ll.re;
        b.r_ll_im[i] = r_ll.im;
        b.t_rl_re[i] = t_rl.re;
        b.t_rl_im[i] = t_rl.im;
        b.r_rl_re[i] = r_rl.re;
        b.r_rl_im[i] = r_rl.im;
        b.d_re[i] = d.re;
        b.d_im[i] = d.im;

        const double tw = b.transfer_weight[i];
        b.raw_t_ll[i] = abs2(t_ll);
        b.raw_r_ll[i] = abs2(r_ll);
        b.raw_t_rl[i] = abs2(t_rl);
        b.raw_r_rl[i] = abs2(r_rl);
        b.flow_t_ll[i] = b.raw_t_ll[i];
        b.flow_r_ll[i] = b.raw_r_ll[i];
        b.flow_t_rl[i] = b.raw_t_rl[i] * tw;
        b.flow_r_rl[i] = b.raw_r_rl[i] * tw;
    }
}

void chain_rhs(std::span<const double> re, std::span<const double> im, double onsite, double hop,
               double h, std::span<double> out_re, std::span<double> out_im) {
    const std::size_t n = re.size();
    assert(im.size() == n && out_re.size() == n && out_im.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re_nb = (i > 0 ? re[i - 1] : 0.0) + (i + 1 < n ? re[i + 1] : 0.0);
        const double im_nb = (i > 0 ? im[i - 1] : 0.0) + (i + 1 < n ? im[i + 1] : 0.0);
        // -i h (H psi): real part gains h Im(H psi), imaginary part loses h Re(H psi)
        const double h_re = onsite * re[i] - hop * re_nb;
        const double h_im = onsite * im[i] - hop * im_nb;
        out_re[i] = re[i] + h * h_im;
        out_im[i] = im[i] - h * h_re;
    }
}

double norm_sq(std::span<const double> re, std::span<const double> im) {
    double sum = 0.0;
    for (std::size_t i = 0; i < re.size(); ++i) {
        sum += re[i] * re[i] + im[i] * im[i];
    }
    return sum;
}

}  // namespace scalar
}  // namespace ladder::kernels
