#pragma once

// Reference example curves with their published combinatorial types, keyed
// by maximal degree.  Coefficients ascend by power.

#include <string>
#include <vector>

#include "crtc/curve.hpp"

namespace refcurves {

struct ExampleCurve {
    std::string name;
    std::vector<double> y1, y2, y3;
    std::vector<int> type;
};

inline crtc::Poly real_poly(const std::vector<double>& c) {
    std::vector<crtc::Complex> v(c.begin(), c.end());
    return crtc::Poly(std::move(v));
}

inline crtc::TrigonalCurve curve_of(const ExampleCurve& e) {
    return crtc::make_curve(real_poly(e.y1), real_poly(e.y2), real_poly(e.y3));
}

inline const std::vector<ExampleCurve>& degree1() {
    static const std::vector<ExampleCurve> v = {
        {"d1", {0, 1}, {0, -1}, {1}, {2, 2, 2}},
    };
    return v;
}

inline const std::vector<ExampleCurve>& degree2() {
    static const std::vector<ExampleCurve> v = {
        {"d2-1", {-1, 0, 1}, {0, -1}, {0, 1}, {4, 4, 2, 2}},
        {"d2-2", {-1, 0, 1}, {0, -1}, {4, 1}, {4, 2, 2, 2, 2}},
        {"d2-3", {-1, 0, 1}, {-0.25, -1}, {-0.25, 1}, {2, 2, 2, 2, 2, 2}},
    };
    return v;
}

inline const std::vector<ExampleCurve>& degree3() {
    static const std::vector<ExampleCurve> v = {
        {"d3-1", {1, 0, 1, 1}, {-2, 0, -2}, {-2}, {6, 6, 2, 2, 2}},
        {"d3-2", {1, 0, 1, 1}, {1, 0, -2}, {-2}, {6, 4, 4, 2, 2}},
        {"d3-3", {1, 0, 1, 1}, {0, 0, -2}, {-2}, {6, 4, 2, 2, 2, 2}},
        {"d3-4", {0, 0, 1, 1}, {0, -1, 2, 1}, {-1.5}, {6, 2, 2, 2, 2, 2, 2}},
        {"d3-5", {2, -6, -3, 2}, {3, -2, -4}, {3.5, -1, 3}, {4, 4, 4, 2, 2, 2}},
        {"d3-6", {1, 1, 3, 1}, {2, 1, -1}, {2, -3, -9, -2}, {4, 4, 2, 2, 2, 2, 2}},
        {"d3-7", {1, 1, 3, 1}, {2, 1, -1}, {2, -3.06, -9, -2}, {4, 2, 2, 2, 2, 2, 2, 2}},
        {"d3-8", {1, -3, 0, 1}, {0, -3, 3}, {}, {2, 2, 2, 2, 2, 2, 2, 2, 2}},
    };
    return v;
}

inline const std::vector<ExampleCurve>& degree4() {
    static const std::vector<ExampleCurve> v = {
        {"d4-01", {126, 9, 1, 2, 1}, {-0.5, 4.4, -4, -3, 3}, {4, 2, 1, 3, -2},
         {8, 8, 2, 2, 2, 2}},
        {"d4-02", {-3, 3, -3, 3, 1}, {-1, 2, 2, -2, 2}, {-1, 1, -1, 1, -1},
         {8, 6, 4, 2, 2, 2}},
        {"d4-03", {-3, 3, -3, 3, 1}, {-1, -2, 2, -2, 2}, {-1, 1, -1, 1, -1},
         {8, 6, 2, 2, 2, 2, 2}},
        {"d4-04", {0, 0, 0, 0, 1}, {-1, 0, 2}, {-16, 0, 8}, {8, 4, 4, 4, 2, 2}},
        {"d4-05", {13, 0, -6, -0.8, 1}, {0, 1, 1, -1}, {-5, 9, 8}, {8, 4, 4, 2, 2, 2, 2}},
        {"d4-06", {-3, 3, -3, 3, 1}, {-1, -0.5, 2, -2, 2}, {-1, 1, -1, 1, -1},
         {8, 4, 2, 2, 2, 2, 2, 2}},
        {"d4-07", {-3, 3, 3, 3, -15}, {-1, 2, 2, 0, 2}, {-1, 1, 1, 1, -1},
         {8, 2, 2, 2, 2, 2, 2, 2, 2}},
        {"d4-08", {-10, 0, -6, -0.8, 1}, {6, 1, 1, -1}, {-16, 9, 8}, {6, 6, 6, 2, 2, 2}},
        {"d4-09", {-2, -3, 0, 0, 1}, {6, 0, 1, 1.5, -0.5}, {-16, 0, 8, -1},
         {6, 6, 4, 4, 2, 2}},
        {"d4-10", {-3, 3, -3, 3, 1}, {-1, 2, 2, 8.5, 2}, {-1, 1, -1, 1, -1},
         {6, 6, 4, 2, 2, 2, 2}},
        {"d4-11", {-3, 3, -3, 3, 1}, {-1, 2, 2, 10.175, 2}, {-1, 1, -1, 1, -1},
         {6, 6, 2, 2, 2, 2, 2, 2}},
        {"d4-12", {-2, -3, 0, 0, 1}, {6, 0, 1, 1.5, -0.5}, {-16, 0, 8},
         {6, 4, 4, 4, 2, 2, 2}},
        {"d4-13", {-3, 3, -3, 3, 1}, {-0.95, -3, 2, -2, 2}, {-1, 1, -1, 1, -1},
         {6, 4, 4, 2, 2, 2, 2, 2}},
        {"d4-14", {0, 6.63, 0, 0, 1}, {-11, 0.35, 2}, {-16, 0, 8},
         {6, 4, 2, 2, 2, 2, 2, 2, 2}},
        {"d4-15", {4.9, 9, 1, 2, 1}, {-0.5, 4.4, -4, -3, 3}, {4, 2, 1, 3, -2},
         {6, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
        {"d4-16", {9, -1, -7, 2, 1}, {-7, 4, 3, -1, 2}, {1, 3, 1, 2, -1}, {4, 4, 4, 4, 4, 4}},
        {"d4-17", {9, 2, -13, 2, 1}, {-7, 3, 3, -1, 2}, {1, 3, 1, 2, -1},
         {4, 4, 4, 4, 4, 2, 2}},
        {"d4-18", {0, 0, 0, 0, 1}, {-5, 0, 2}, {-16, 0, 8}, {4, 4, 4, 4, 2, 2, 2, 2}},
        {"d4-19", {-5.5, 0, 0, 0, 1}, {-5, 0, 2}, {-16, 0, 8}, {4, 4, 4, 2, 2, 2, 2, 2, 2}},
        {"d4-20", {-4, 0, 0, 0, 1}, {-1, 0, 2}, {-16, 0, 8}, {4, 4, 2, 2, 2, 2, 2, 2, 2, 2}},
        {"d4-21", {-8.5, 0, 0, 0, 1}, {-1, 0, 2}, {-16, 0, 8},
         {4, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
        {"d4-22", {0, 4, -6, 0, 1}, {1, 0, -6, 4}, {}, {2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2}},
    };
    return v;
}

inline std::vector<ExampleCurve> all_examples() {
    std::vector<ExampleCurve> out;
    for (const auto* set : {&degree1(), &degree2(), &degree3(), &degree4()})
        out.insert(out.end(), set->begin(), set->end());
    return out;
}

}  // namespace refcurves
