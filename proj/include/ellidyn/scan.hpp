#ifndef ELLIDYN_SCAN_HPP
#define ELLIDYN_SCAN_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <ellidyn/dynamics.hpp>
#include <ellidyn/misiurewicz.hpp>

namespace ellidyn
{

// Pixel (px, py) maps to origin + px * extent.re / width + i py * extent.im / height.
struct ScanGrid {
    Complex origin;
    Complex extent;
    int width_px;
    int height_px;

    Complex point(int px, int py) const;
    void validate() const;
};

struct Rgb {
    std::uint8_t r;
    std::uint8_t g;
    std::uint8_t b;

    bool operator==(const Rgb &) const = default;
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels; // row-major, top row first

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h)) {}

    Rgb &at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb &at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

inline constexpr Rgb kPrepoleColor{255, 255, 255};
inline constexpr Rgb kIndeterminateColor{0, 0, 0};
inline constexpr Rgb kErrorColor{255, 0, 255};

// Hue from the period (golden-ratio spacing); the three-cycle case of the
// triangular family is drawn brighter than the single-cycle case.
Rgb cycle_color(int period, int count);
// Cyclic palette for pole-hit steps.
Rgb hit_step_color(int step);

inline constexpr const char *kClassificationHeader =
    "px,py,lambda_re,lambda_im,verdict,count,period,mult_re,mult_im,abs_mult";

struct ParameterScan {
    Image image;
    // Header line plus one row per pixel, row-major.
    std::string csv;
};

ParameterScan render_parameter_plane(LatticeKind kind, const ScanGrid &grid, int budget,
                                     const ToleranceConfig &cfg = {}, Execution exec = Execution::Parallel);

// Step at which z was captured by a pole within budget, -1 otherwise.
int pole_hit_step(const Lattice &lat, Complex z, int budget, const ToleranceConfig &cfg);

Image render_dynamical_plane(LatticeKind kind, Complex lambda, const ScanGrid &grid, int budget,
                             const ToleranceConfig &cfg = {}, Execution exec = Execution::Parallel);

// Binary P6 file written through a temporary and renamed into place.
void write_ppm(const Image &image, const std::filesystem::path &path);
std::string ppm_bytes(const Image &image);

// Writes text through a temporary file and renames it into place.
void write_text_file(const std::string &text, const std::filesystem::path &path);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

} // namespace ellidyn

#endif
