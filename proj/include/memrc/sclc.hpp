// Piecewise power-law analysis of I-V sweeps: least-squares line fits in
// (log10 V, log10 I), automatic breakpoint selection, and slope-based
// classification into ohmic / space-charge-limited / trap-filled-limit
// conduction regions.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memrc {

struct IvPoint {
    double voltage = 0.0;  // volts, > 0
    double current = 0.0;  // amperes, > 0
};

struct IvTrace {
    std::vector<IvPoint> points;  // strictly increasing voltage
    std::string branch;           // e.g. "HRS" or "LRS"

    void validate() const;  // throws std::domain_error / std::invalid_argument
};

enum class Conduction { ohmic, sclc, tfl, unclassified };

std::string to_string(Conduction c);

// Slope thresholds: [0.8, 1.2] ohmic, (1.2, 2.2] sclc, > 2.2 tfl,
// < 0.8 unclassified (sub-ohmic anomaly).
Conduction classify_slope(double slope);

struct RegionFit {
    double v_lo = 0.0;   // volts, first point of the segment
    double v_hi = 0.0;   // volts, last point of the segment
    double slope = 0.0;  // d log10 I / d log10 V
    double intercept = 0.0;   // log10 amperes at V = 1
    double r_squared = 0.0;   // in [0,1]
    Conduction classification = Conduction::unclassified;
    std::size_t first = 0;    // point indices, inclusive
    std::size_t last = 0;
};

// Fits one line per segment, segments delimited by the given breakpoint
// voltages (a point with V >= breakpoint starts the next segment). Every
// segment needs >= 3 points. An empty breakpoint list fits a single region.
std::vector<RegionFit> fit_segments(const IvTrace& trace,
                                    const std::vector<double>& breakpoints);

// Automatic mode: tries 0, 1, and 2 breakpoints placed at measured voltage
// points (>= 3 points per segment) and keeps the segmentation with the best
// Bayesian information criterion over the log-domain residuals, so extra
// breakpoints must earn their additional parameters.
std::vector<RegionFit> fit_segments_auto(const IvTrace& trace);

// Total squared residual of a fitted segmentation in the log10 domain.
double total_squared_residual(const IvTrace& trace, const std::vector<RegionFit>& fits);

}  // namespace memrc
