#pragma once

namespace fkpp {

/// Uniform partition x_i = i*h of [0, length], 0 <= i <= n.
class Grid1D {
public:
    /// Rejects n < 3: there would be fewer than two interior nodes.
    Grid1D(double length, int n);

    /// Builds the grid from a spacing; length/h must be an integer up to 1e-9 relative.
    static Grid1D from_spacing(double length, double h);

    double length() const noexcept { return length_; }
    int intervals() const noexcept { return n_; }
    int size() const noexcept { return n_ + 1; }
    double spacing() const noexcept { return h_; }
    double node(int i) const noexcept { return i == n_ ? length_ : i * h_; }

    friend bool operator==(const Grid1D&, const Grid1D&) = default;

private:
    double length_;
    int n_;
    double h_;
};

/// Time levels t^n = n*k, 0 <= n <= steps, with steps*k = horizon.
class TimeMesh {
public:
    TimeMesh(double horizon, int steps);

    static TimeMesh from_step(double horizon, double k);

    double horizon() const noexcept { return horizon_; }
    int steps() const noexcept { return steps_; }
    int levels() const noexcept { return steps_ + 1; }
    double step() const noexcept { return k_; }
    double level(int n) const noexcept { return n * k_; }

    friend bool operator==(const TimeMesh&, const TimeMesh&) = default;

private:
    double horizon_;
    int steps_;
    double k_;
};

}  // namespace fkpp
