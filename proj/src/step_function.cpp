#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "ot/errors.hpp"
#include "ot/majorization.hpp"

namespace ot {

StepFunction::StepFunction(RealVector breakpoints, RealVector values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty() || breaks_.size() != values_.size() + 1)
        throw DimensionError("StepFunction: need m >= 1 values and m+1 breakpoints");
    if (breaks_.front() != 0.0 || std::abs(breaks_.back() - 1.0) > 1e-12)
        throw InvariantError("StepFunction: breakpoints must span [0,1]");
    breaks_.back() = 1.0;
    for (std::size_t k = 0; k + 1 < breaks_.size(); ++k)
        if (!(breaks_[k] < breaks_[k + 1])) throw InvariantError("StepFunction: breakpoints not strictly increasing");
    for (double v : values_)
        if (!std::isfinite(v)) throw InvariantError("StepFunction: non-finite value");
}

StepFunction StepFunction::uniform(RealVector values) {
    const std::size_t m = values.size();
    RealVector b(m + 1);
    for (std::size_t k = 0; k <= m; ++k) b[k] = static_cast<double>(k) / static_cast<double>(m);
    return StepFunction(std::move(b), std::move(values));
}

double StepFunction::operator()(double z) const {
    if (z >= 1.0) return values_.back();
    if (z <= 0.0) return values_.front();
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), z);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepFunction::integral() const {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) s += values_[k] * length(k);
    return s;
}

double StepFunction::integral_power(int p) const {
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) s += std::pow(values_[k], p) * length(k);
    return s;
}

double StepFunction::first_moment_z() const {
    // int_{a}^{b} z dz = (b^2 - a^2)/2 = (b - a)(b + a)/2
    double s = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k)
        s += values_[k] * 0.5 * (breaks_[k + 1] - breaks_[k]) * (breaks_[k + 1] + breaks_[k]);
    return s;
}

bool StepFunction::nonincreasing() const noexcept {
    for (std::size_t k = 0; k + 1 < values_.size(); ++k)
        if (values_[k + 1] > values_[k]) return false;
    return true;
}

StepFunction rearrangement_step(const StepFunction& f) {
    const std::size_t m = f.segments();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f.values()[a] > f.values()[b]; });

    RealVector values, lengths;
    for (std::size_t k : order) {
        const double v = f.values()[k];
        if (!values.empty() && values.back() == v) {
            lengths.back() += f.length(k);
        } else {
            values.push_back(v);
            lengths.push_back(f.length(k));
        }
    }
    RealVector b(values.size() + 1, 0.0);
    for (std::size_t k = 0; k < values.size(); ++k) b[k + 1] = b[k] + lengths[k];
    b.back() = 1.0;
    // Tiny segments can collapse under roundoff; merge any that did.
    RealVector bb{0.0}, vv;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (b[k + 1] <= bb.back()) continue;
        bb.push_back(b[k + 1]);
        vv.push_back(values[k]);
    }
    return StepFunction(std::move(bb), std::move(vv));
}

namespace {

// int_0^s h for a step function h, at every s in `points` (sorted ascending).
RealVector cumulative_at(const StepFunction& h, std::span<const double> points) {
    RealVector out(points.size());
    std::size_t k = 0;
    double acc = 0.0;  // integral up to breakpoints()[k]
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double s = points[p];
        while (k < h.segments() && h.breakpoints()[k + 1] <= s) {
            acc += h.values()[k] * h.length(k);
            ++k;
        }
        out[p] = k < h.segments() ? acc + h.values()[k] * (s - h.breakpoints()[k]) : acc;
    }
    return out;
}

}  // namespace

StepMajorizationCertificate majorizes_step(const StepFunction& f, const StepFunction& g, double tol) {
    const StepFunction fs = rearrangement_step(f);
    const StepFunction gs = rearrangement_step(g);

    RealVector pts;
    pts.reserve(fs.breakpoints().size() + gs.breakpoints().size());
    std::merge(fs.breakpoints().begin() + 1, fs.breakpoints().end(), gs.breakpoints().begin() + 1,
               gs.breakpoints().end(), std::back_inserter(pts));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const RealVector cf = cumulative_at(fs, pts);
    const RealVector cg = cumulative_at(gs, pts);

    StepMajorizationCertificate cert;
    cert.abscissae = pts;
    cert.gaps.resize(pts.size());
    cert.holds = true;
    cert.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < pts.size(); ++p) {
        cert.gaps[p] = cf[p] - cg[p];
        const bool last = p + 1 == pts.size();
        cert.min_gap = std::min(cert.min_gap, cert.gaps[p]);
        if (!last) {
            if (cert.gaps[p] < -tol) cert.holds = false;
        } else if (std::abs(cert.gaps[p]) > tol) {
            cert.holds = false;
        }
    }
    return cert;
}

}  // namespace ot
