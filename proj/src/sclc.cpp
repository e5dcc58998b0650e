#include "memrc/sclc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace memrc {

void IvTrace::validate() const {
    if (points.size() < 3)
        throw std::invalid_argument("iv trace needs at least 3 points");
    double prev_v = 0.0;
    for (const auto& p : points) {
        if (!(p.voltage > 0.0) || !(p.current > 0.0))
            throw std::domain_error("iv trace requires positive voltage and current");
        if (p.voltage <= prev_v)
            throw std::invalid_argument("iv trace voltages must be strictly increasing");
        prev_v = p.voltage;
    }
}

std::string to_string(Conduction c) {
    switch (c) {
        case Conduction::ohmic: return "ohmic";
        case Conduction::sclc: return "sclc";
        case Conduction::tfl: return "tfl";
        default: return "unclassified";
    }
}

Conduction classify_slope(double slope) {
    if (slope < 0.8) return Conduction::unclassified;
    if (slope <= 1.2) return Conduction::ohmic;
    if (slope <= 2.2) return Conduction::sclc;
    return Conduction::tfl;
}

namespace {

// inclusive [first, last]
RegionFit fit_one(const IvTrace& trace, std::size_t first, std::size_t last) {
    const std::size_t n = last - first + 1;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const double x = std::log10(trace.points[i].voltage);
        const double y = std::log10(trace.points[i].current);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    RegionFit fit;
    fit.first = first;
    fit.last = last;
    fit.v_lo = trace.points[first].voltage;
    fit.v_hi = trace.points[last].voltage;
    if (std::abs(denom) < 1e-30)
        throw std::invalid_argument("iv segment has no voltage spread");
    fit.slope = (dn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / dn;

    double ssr = 0.0, sst = 0.0;
    const double ymean = sy / dn;
    for (std::size_t i = first; i <= last; ++i) {
        const double x = std::log10(trace.points[i].voltage);
        const double y = std::log10(trace.points[i].current);
        const double e = y - (fit.intercept + fit.slope * x);
        ssr += e * e;
        sst += (y - ymean) * (y - ymean);
    }
    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
    fit.classification = classify_slope(fit.slope);
    return fit;
}

double segment_ssr(const IvTrace& trace, const RegionFit& fit) {
    double ssr = 0.0;
    for (std::size_t i = fit.first; i <= fit.last; ++i) {
        const double x = std::log10(trace.points[i].voltage);
        const double y = std::log10(trace.points[i].current);
        const double e = y - (fit.intercept + fit.slope * x);
        ssr += e * e;
    }
    return ssr;
}

std::vector<RegionFit> fit_at_cuts(const IvTrace& trace,
                                   const std::vector<std::size_t>& cuts) {
    // cuts are indices of the first point of each new segment
    std::vector<RegionFit> fits;
    std::size_t first = 0;
    for (const std::size_t cut : cuts) {
        fits.push_back(fit_one(trace, first, cut - 1));
        first = cut;
    }
    fits.push_back(fit_one(trace, first, trace.points.size() - 1));
    return fits;
}

}  // namespace

double total_squared_residual(const IvTrace& trace, const std::vector<RegionFit>& fits) {
    double total = 0.0;
    for (const auto& fit : fits) total += segment_ssr(trace, fit);
    return total;
}

std::vector<RegionFit> fit_segments(const IvTrace& trace,
                                    const std::vector<double>& breakpoints) {
    trace.validate();
    std::vector<double> bps = breakpoints;
    std::sort(bps.begin(), bps.end());
    std::vector<std::size_t> cuts;
    std::size_t start = 0;
    for (const double bp : bps) {
        std::size_t cut = start;
        while (cut < trace.points.size() && trace.points[cut].voltage < bp) ++cut;
        if (cut - start < 3 || trace.points.size() - cut < 3)
            throw std::invalid_argument("segment has fewer than 3 points");
        cuts.push_back(cut);
        start = cut;
    }
    return fit_at_cuts(trace, cuts);
}

std::vector<RegionFit> fit_segments_auto(const IvTrace& trace) {
    trace.validate();
    const std::size_t n = trace.points.size();
    const double dn = static_cast<double>(n);
    // Residuals below this are numerical dust (double-precision log-domain
    // round-off is ~1e-15 per point, squared 1e-30); flooring the SSR makes
    // every "numerically perfect" segmentation tie, so the parameter penalty
    // alone decides and extra breakpoints never win on round-off noise.
    const double floor_ssr = 1e-20;

    auto bic = [&](const std::vector<RegionFit>& fits) {
        const double ssr = std::max(total_squared_residual(trace, fits), floor_ssr);
        // 2 line parameters per segment + 1 per breakpoint
        const double params = 3.0 * static_cast<double>(fits.size() - 1) + 2.0;
        return dn * std::log(ssr / dn) + params * std::log(dn);
    };

    std::vector<RegionFit> best = fit_at_cuts(trace, {});
    double best_bic = bic(best);

    // one breakpoint
    for (std::size_t c = 3; c + 3 <= n; ++c) {
        const auto fits = fit_at_cuts(trace, {c});
        const double b = bic(fits);
        if (b < best_bic) {
            best_bic = b;
            best = fits;
        }
    }
    // two breakpoints
    for (std::size_t c1 = 3; c1 + 6 <= n; ++c1) {
        for (std::size_t c2 = c1 + 3; c2 + 3 <= n; ++c2) {
            const auto fits = fit_at_cuts(trace, {c1, c2});
            const double b = bic(fits);
            if (b < best_bic) {
                best_bic = b;
                best = fits;
            }
        }
    }
    return best;
}

}  // namespace memrc
