#include "pkn/preserver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "pkn/rng.hpp"
#include "pkn/svd.hpp"

namespace pkn {

namespace {

constexpr double kStageTol = 1e-6;
constexpr double kUnitaryTol = 1e-10;

std::string stage_message(const std::string& stage, int depth, double residual) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "decomposition rejected at stage %s (depth %d, residual %.3e)",
                  stage.c_str(), depth, residual);
    return buf;
}

}  // namespace

DecompositionError::DecompositionError(std::string stage_, int depth_, double residual_)
    : std::runtime_error(stage_message(stage_, depth_, residual_)),
      stage(std::move(stage_)),
      depth(depth_),
      residual(residual_) {}

CanonicalPreserver::CanonicalPreserver(TensorShape shape_, Matrix u_, Matrix v_,
                                       std::vector<bool> flags_)
    : shape(std::move(shape_)), u(std::move(u_)), v(std::move(v_)), flags(std::move(flags_)) {
    const std::size_t n = shape.total();
    if (u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n)
        throw std::invalid_argument("CanonicalPreserver: u, v must match the product dimension");
    if (flags.size() != shape.factors())
        throw std::invalid_argument("CanonicalPreserver: one flag per factor");
    if (unitarity_residual(u) > kUnitaryTol || unitarity_residual(v) > kUnitaryTol)
        throw std::invalid_argument("CanonicalPreserver: u and v must be unitary");
}

Matrix apply_canonical(const CanonicalPreserver& cp, const Matrix& x) {
    const std::size_t n = cp.shape.total();
    if (x.rows() != n || x.cols() != n)
        throw std::invalid_argument("apply_canonical: input size mismatch");
    return cp.u * (partial_transpose(x, cp.shape, cp.flags) * cp.v);
}

Superoperator to_superoperator(const CanonicalPreserver& cp) {
    const std::size_t n = cp.shape.total();
    Matrix mat(n * n, n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) {
            const Vec col = vec(apply_canonical(cp, Matrix::unit(n, n, r, c)));
            for (std::size_t t = 0; t < n * n; ++t) mat(t, r + n * c) = col[t];
        }
    return Superoperator(cp.shape, std::move(mat));
}

CanonicalPreserver sample_canonical(const TensorShape& shape, std::uint64_t seed) {
    const std::size_t n = shape.total();
    Rng ru = derive_rng(seed, 0);
    Rng rv = derive_rng(seed, 1);
    Rng rf = derive_rng(seed, 2);
    Matrix u = random_unitary(n, ru);
    Matrix v = random_unitary(n, rv);
    std::vector<bool> flags(shape.factors());
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = rf.uniform() < 0.5;
    return CanonicalPreserver(shape, std::move(u), std::move(v), std::move(flags));
}

double preserver_distance(const Superoperator& a, const Superoperator& b) {
    if (!(a.shape == b.shape))
        throw std::invalid_argument("preserver_distance: shape mismatch");
    cplx overlap{};
    const std::span<const cplx> am = a.mat.data(), bm = b.mat.data();
    for (std::size_t i = 0; i < am.size(); ++i) overlap += std::conj(bm[i]) * am[i];
    const double scale = frobenius_norm(b.mat);
    if (scale == 0.0) return frobenius_norm(a.mat) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0.0 ? overlap / mag : cplx{1.0, 0.0};
    return frobenius_norm(a.mat - phase * b.mat) / scale;
}

PreservationReport verify_preservation(const Superoperator& phi, const PkParams& params,
                                       std::int64_t trials, std::uint64_t seed, double tol) {
    const PkParams list[] = {params};
    return std::move(verify_preservation_sweep(phi, list, trials, seed, tol).front());
}

std::vector<PreservationReport> verify_preservation_sweep(
    const Superoperator& phi, std::span<const PkParams> params_list,
    std::int64_t trials, std::uint64_t seed, double tol) {
    if (phi.shape.factors() < 2)
        throw std::invalid_argument("verify_preservation: need at least two tensor factors");
    if (params_list.empty())
        throw std::invalid_argument("verify_preservation: empty parameter list");
    if (trials < 1) throw std::invalid_argument("verify_preservation: trials must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("verify_preservation: tol must be positive");

    std::vector<PreservationReport> reports(params_list.size());
    for (std::size_t i = 0; i < params_list.size(); ++i) {
        reports[i].params = params_list[i];
        reports[i].trials = trials;
        reports[i].seed = seed;
        reports[i].tol = tol;
    }
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng = derive_rng(seed, static_cast<std::uint64_t>(t));
        std::vector<Matrix> factors;
        factors.reserve(phi.shape.factors());
        for (int d : phi.shape.dims)
            factors.push_back(ginibre(static_cast<std::size_t>(d), static_cast<std::size_t>(d), rng));
        const Matrix x = kron_multi(factors);
        const Matrix y = apply_superop(phi, x);
        const std::vector<double> sx = singular_values(x);
        const std::vector<double> sy = singular_values(y);
        for (std::size_t i = 0; i < params_list.size(); ++i) {
            const double nx = pk_from_singular_values(sx, params_list[i]);
            const double ny = pk_from_singular_values(sy, params_list[i]);
            const double dev = std::abs(ny - nx) / std::max(nx, 1e-300);
            PreservationReport& rep = reports[i];
            if (dev > rep.max_deviation) {
                rep.max_deviation = dev;
                rep.worst_trial = t;
            }
            if (dev > tol && !rep.first_violation) {
                Witness w;
                w.scalars = {{"trial", static_cast<double>(t)},
                             {"input_norm", nx},
                             {"image_norm", ny},
                             {"deviation", dev}};
                w.matrices = {{"input", x}};
                rep.first_violation = std::move(w);
            }
        }
    }
    for (PreservationReport& rep : reports) rep.preserved = rep.max_deviation <= tol;
    return reports;
}

namespace {

struct PeelResult {
    Matrix left;   // accumulated left unitary of the peeled level
    Matrix right;  // accumulated right unitary
    bool last_flag;
    Superoperator mu;  // induced map on the leading factor group
};

void note(std::vector<StageDiagnostic>& diags, const char* stage, int depth, double residual) {
    diags.push_back({stage, depth, residual});
}

// Flag detection on one n^2 x n^2 block superoperator: a unitary sandwich
// realigns to a rank-one matrix, composing with the transpose first when the
// factor map transposes.  Exactly one variant may pass.
struct FactorForm {
    bool transposed;
    KronRankOne factors;
};
FactorForm detect_factor_form(const Superoperator& s, const Matrix& transpose_mat,
                              int depth, std::vector<StageDiagnostic>& diags) {
    const KronRankOne plain = nearest_kron_rank1(s);
    const KronRankOne twisted =
        nearest_kron_rank1(Superoperator(s.shape, s.mat * transpose_mat));
    const bool ok_plain = plain.residual <= kStageTol;
    const bool ok_twisted = twisted.residual <= kStageTol;
    if (ok_plain == ok_twisted) {
        const double r = ok_plain ? std::max(plain.residual, twisted.residual)
                                  : std::min(plain.residual, twisted.residual);
        note(diags, ok_plain ? "ambiguous-factor-form" : "factor-form", depth, r);
        throw DecompositionError(ok_plain ? "ambiguous-factor-form" : "factor-form", depth, r);
    }
    return FactorForm{ok_twisted, ok_twisted ? twisted : plain};
}

// Stages 1-6 for the grouping (leading factors, last factor): strips the
// outer unitaries and the per-block factors of the last slot, leaving the
// induced map on the leading group.
PeelResult peel_last_factor(const Superoperator& phi, int depth,
                            std::vector<StageDiagnostic>& diags) {
    const std::vector<int>& dims = phi.shape.dims;
    const std::size_t nn = static_cast<std::size_t>(dims.back());
    const std::size_t big = phi.shape.total();
    const std::size_t mm = big / nn;

    // basis images phi(E_tt): rank one with unit singular value
    Matrix u0(big, big), v0(big, big);
    double rank_residual = 0.0;
    for (std::size_t t = 0; t < big; ++t) {
        const Vec col = matvec(phi.mat, vec(Matrix::unit(big, big, t, t)));
        const Svd dec = svd(unvec(col, big, big));
        double r = std::abs(dec.values[0] - 1.0);
        if (dec.values.size() > 1 && dec.values[0] > 0.0)
            r = std::max(r, dec.values[1] / dec.values[0]);
        rank_residual = std::max(rank_residual, r);
        set_column(u0, t, get_column(dec.left, 0).data());
        set_column(v0, t, get_column(dec.right, 0).data());
    }
    note(diags, "basis-rank-one", depth, rank_residual);
    if (rank_residual > kStageTol)
        throw DecompositionError("basis-rank-one", depth, rank_residual);

    // the singular vectors must form orthonormal families
    const double family_residual = std::max(unitarity_residual(u0), unitarity_residual(v0));
    note(diags, "basis-orthonormal", depth, family_residual);
    if (family_residual > kStageTol)
        throw DecompositionError("basis-orthonormal", depth, family_residual);
    u0 = nearest_unitary(u0);
    v0 = nearest_unitary(v0);

    // phi'(x) = u0^* phi(x) v0 fixes every diagonal basis unit
    const Matrix phi1 = kron(transpose(v0), adjoint(u0)) * phi.mat;

    // diagonal block maps on the last factor
    const Matrix pn = transpose_superop_mat(nn);
    const TensorShape leaf({static_cast<int>(nn)});
    std::vector<Matrix> w_blocks;
    w_blocks.reserve(mm);
    std::vector<bool> flags(mm);
    double block_leak = 0.0, form_residual = 0.0, conj_residual = 0.0;
    for (std::size_t i = 0; i < mm; ++i) {
        Matrix si(nn * nn, nn * nn);
        for (std::size_t s = 0; s < nn; ++s)
            for (std::size_t r = 0; r < nn; ++r) {
                const Vec col =
                    matvec(phi1, vec(Matrix::unit(big, big, i * nn + r, i * nn + s)));
                const Matrix y = unvec(col, big, big);
                const Matrix block = get_block(y, i * nn, i * nn, nn, nn);
                const double total = frobenius_norm(y);
                const double kept = frobenius_norm(block);
                const double leak = std::sqrt(std::max(0.0, total * total - kept * kept)) /
                                    std::max(1.0, total);
                block_leak = std::max(block_leak, leak);
                const Vec bcol = vec(block);
                for (std::size_t q = 0; q < nn * nn; ++q) si(q, r + nn * s) = bcol[q];
            }
        if (block_leak > kStageTol) {
            note(diags, "block-structure", depth, block_leak);
            throw DecompositionError("block-structure", depth, block_leak);
        }
        const FactorForm form = detect_factor_form(Superoperator(leaf, si), pn, depth, diags);
        flags[i] = form.transposed;
        form_residual = std::max(form_residual, form.factors.residual);

        // the right factor must be the adjoint of the left one up to phase
        const Matrix& a = form.factors.a;
        const Matrix& b = form.factors.b;
        cplx ip{};
        for (std::size_t rr = 0; rr < nn; ++rr)
            for (std::size_t cc = 0; cc < nn; ++cc) ip += a(rr, cc) * b(cc, rr);
        const double mag = std::abs(ip);
        const cplx lam = mag > 0.0 ? ip / mag : cplx{1.0, 0.0};
        const double cres =
            frobenius_norm(b - lam * adjoint(a)) / std::max(1.0, frobenius_norm(a));
        conj_residual = std::max(conj_residual, cres);
        w_blocks.push_back(nearest_unitary(a));
    }
    note(diags, "block-structure", depth, block_leak);
    note(diags, "factor-form", depth, form_residual);
    note(diags, "conjugate-pair", depth, conj_residual);
    if (conj_residual > kStageTol)
        throw DecompositionError("conjugate-pair", depth, conj_residual);

    const bool last_flag = flags[0];
    for (bool f : flags)
        if (f != last_flag) {
            note(diags, "flag-consistency", depth, 1.0);
            throw DecompositionError("flag-consistency", depth, 1.0);
        }
    note(diags, "flag-consistency", depth, 0.0);

    // absorb w = (+) w_i; what remains acts on the leading group alone
    Matrix w(big, big);
    for (std::size_t i = 0; i < mm; ++i) set_block(w, i * nn, i * nn, w_blocks[i]);
    const Matrix phi2 = kron(transpose(w), adjoint(w)) * phi1;

    const TensorShape split({static_cast<int>(mm), static_cast<int>(nn)});
    const auto extract = [&](const Matrix& probe) {
        const double tr0 = std::real(trace(probe));
        Matrix mu(mm * mm, mm * mm);
        for (std::size_t s = 0; s < mm; ++s)
            for (std::size_t r = 0; r < mm; ++r) {
                Matrix x(big, big);
                for (std::size_t rr = 0; rr < nn; ++rr)
                    for (std::size_t cc = 0; cc < nn; ++cc)
                        x(r * nn + rr, s * nn + cc) = probe(rr, cc);
                const Matrix y = unvec(matvec(phi2, vec(x)), big, big);
                const Vec rcol = vec(partial_trace_second(y, split));
                for (std::size_t q = 0; q < mm * mm; ++q) mu(q, r + mm * s) = rcol[q] / tr0;
            }
        return mu;
    };
    Matrix mu = extract(Matrix::unit(nn, nn, 0, 0));
    if (frobenius_norm(mu) < 0.1 * static_cast<double>(mm)) {
        // trace of the probe image was degenerate; retry with a generic probe
        Rng probe_rng(0x50524F4245ULL + nn);
        mu = extract(random_psd(nn, probe_rng));
        if (frobenius_norm(mu) < 0.1 * static_cast<double>(mm)) {
            note(diags, "group-reduction", depth, frobenius_norm(mu));
            throw DecompositionError("group-reduction", depth, frobenius_norm(mu));
        }
    }

    std::vector<int> lead(dims.begin(), dims.end() - 1);
    return PeelResult{u0 * w, adjoint(w) * adjoint(v0), last_flag,
                      Superoperator(TensorShape(std::move(lead)), std::move(mu))};
}

CanonicalPreserver decompose_core(const Superoperator& phi, int depth,
                                  std::vector<StageDiagnostic>& diags) {
    if (phi.shape.factors() == 1) {
        const std::size_t n = phi.shape.total();
        const FactorForm form =
            detect_factor_form(phi, transpose_superop_mat(n), depth, diags);
        note(diags, "factor-form", depth, form.factors.residual);
        return CanonicalPreserver(phi.shape, nearest_unitary(form.factors.a),
                                  nearest_unitary(form.factors.b), {form.transposed});
    }
    PeelResult peel = peel_last_factor(phi, depth, diags);
    const std::size_t nlast = phi.shape.total() / peel.mu.shape.total();
    const CanonicalPreserver inner = decompose_core(peel.mu, depth + 1, diags);
    const Matrix eye = Matrix::identity(nlast);
    Matrix u = peel.left * kron(inner.u, eye);
    Matrix v = kron(inner.v, eye) * peel.right;
    std::vector<bool> flags = inner.flags;
    flags.push_back(peel.last_flag);
    return CanonicalPreserver(phi.shape, std::move(u), std::move(v), std::move(flags));
}

DecompositionResult run_decomposition(const Superoperator& phi, const PkParams& params) {
    if (!(params.p > 2.0)) throw std::invalid_argument("decompose: p must exceed 2");
    std::vector<StageDiagnostic> diags;
    CanonicalPreserver cp = decompose_core(phi, 0, diags);
    const double residual = preserver_distance(to_superoperator(cp), phi);
    return DecompositionResult{std::move(cp), residual, std::move(diags)};
}

}  // namespace

DecompositionResult decompose_bipartite(const Superoperator& phi, const PkParams& params) {
    if (phi.shape.factors() != 2)
        throw std::invalid_argument("decompose_bipartite: need exactly two factors");
    return run_decomposition(phi, params);
}

DecompositionResult decompose_multipartite(const Superoperator& phi, const PkParams& params) {
    if (phi.shape.factors() < 2)
        throw std::invalid_argument("decompose_multipartite: need at least two factors");
    return run_decomposition(phi, params);
}

}  // namespace pkn
