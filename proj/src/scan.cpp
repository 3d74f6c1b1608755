#include <ellidyn/scan.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <system_error>

#include <ellidyn/errors.hpp>

namespace ellidyn
{

Complex ScanGrid::point(int px, int py) const
{
    return origin + Complex{px * extent.real() / width_px, py * extent.imag() / height_px};
}

void ScanGrid::validate() const
{
    if (width_px < 1 || height_px < 1) {
        throw std::invalid_argument("scan grid needs at least one pixel in each direction");
    }
}

namespace
{

Rgb hsv(double h, double s, double v)
{
    h = h - std::floor(h);
    const double x = h * 6.0;
    const int sector = static_cast<int>(x) % 6;
    const double f = x - std::floor(x);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    double r = v, g = t, b = p;
    switch (sector) {
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    case 5: r = v; g = p; b = q; break;
    default: break;
    }
    const auto byte = [](double c) { return static_cast<std::uint8_t>(std::lround(255.0 * c)); };
    return {byte(r), byte(g), byte(b)};
}

constexpr double kGolden = 0.6180339887498949;

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct PixelResult {
    Rgb color;
    std::string row;
};

PixelResult classify_pixel(LatticeKind kind, Complex lambda, int px, int py, int budget, const ToleranceConfig &cfg)
{
    std::string row = std::to_string(px) + "," + std::to_string(py) + "," + format_double(lambda.real()) + ","
                      + format_double(lambda.imag()) + ",";
    try {
        const Verdict v = classify(kind, lambda, budget, cfg);
        row += verdict_tag(v);
        if (const auto *c = std::get_if<AttractingCycles>(&v)) {
            const Complex m = c->cycle.multiplier;
            row += "," + std::to_string(c->count) + "," + std::to_string(c->cycle.period) + ","
                   + format_double(m.real()) + "," + format_double(m.imag()) + "," + format_double(std::abs(m));
            return {cycle_color(c->cycle.period, c->count), row};
        }
        row += ",,,,,";
        return {std::holds_alternative<AllCriticalPrepole>(v) ? kPrepoleColor : kIndeterminateColor, row};
    } catch (const std::exception &) {
        row += "Error,,,,,";
        return {kErrorColor, row};
    }
}

} // namespace

Rgb cycle_color(int period, int count)
{
    return hsv(period * kGolden, 0.85, count == 3 ? 1.0 : 0.65);
}

Rgb hit_step_color(int step)
{
    return hsv(0.07 * step, 0.75, 0.95);
}

ParameterScan render_parameter_plane(LatticeKind kind, const ScanGrid &grid, int budget, const ToleranceConfig &cfg,
                                     Execution exec)
{
    grid.validate();
    ParameterScan out{Image(grid.width_px, grid.height_px), {}};
    std::vector<std::string> rows(out.image.pixels.size());
    const auto row_job = [&](int py) {
        for (int px = 0; px < grid.width_px; ++px) {
            PixelResult r = classify_pixel(kind, grid.point(px, py), px, py, budget, cfg);
            out.image.at(px, py) = r.color;
            rows[static_cast<std::size_t>(py) * grid.width_px + px] = std::move(r.row);
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int py = 0; py < grid.height_px; ++py) {
            row_job(py);
        }
    } else {
        for (int py = 0; py < grid.height_px; ++py) {
            row_job(py);
        }
    }
    out.csv = std::string(kClassificationHeader) + "\n";
    for (const std::string &r : rows) {
        out.csv += r;
        out.csv += '\n';
    }
    return out;
}

int pole_hit_step(const Lattice &lat, Complex z, int budget, const ToleranceConfig &cfg)
{
    for (int k = 0; k <= budget; ++k) {
        if (!is_finite(z) || is_pole_hit(z, lat, cfg)) {
            return k;
        }
        if (k == budget) {
            break;
        }
        z = wp(z, lat, cfg);
    }
    return -1;
}

Image render_dynamical_plane(LatticeKind kind, Complex lambda, const ScanGrid &grid, int budget,
                             const ToleranceConfig &cfg, Execution exec)
{
    grid.validate();
    const Lattice lat = make_lattice(kind, lambda, cfg);
    Image img(grid.width_px, grid.height_px);
    const auto row_job = [&](int py) {
        for (int px = 0; px < grid.width_px; ++px) {
            const int step = pole_hit_step(lat, grid.point(px, py), budget, cfg);
            img.at(px, py) = step < 0 ? kIndeterminateColor : hit_step_color(step);
        }
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int py = 0; py < grid.height_px; ++py) {
            row_job(py);
        }
    } else {
        for (int py = 0; py < grid.height_px; ++py) {
            row_job(py);
        }
    }
    return img;
}

std::string ppm_bytes(const Image &image)
{
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + 3 * image.pixels.size());
    for (const Rgb &p : image.pixels) {
        out.push_back(static_cast<char>(p.r));
        out.push_back(static_cast<char>(p.g));
        out.push_back(static_cast<char>(p.b));
    }
    return out;
}

void write_text_file(const std::string &text, const std::filesystem::path &path)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw IoFailure("cannot open " + tmp.string() + ": " + std::strerror(errno));
        }
        os.write(text.data(), static_cast<std::streamsize>(text.size()));
        os.flush();
        if (!os) {
            const std::string why = std::strerror(errno);
            os.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoFailure("cannot write " + tmp.string() + ": " + why);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoFailure("cannot rename into " + path.string() + ": " + ec.message());
    }
}

void write_ppm(const Image &image, const std::filesystem::path &path)
{
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height)) {
        throw std::invalid_argument("image buffer does not match its dimensions");
    }
    write_text_file(ppm_bytes(image), path);
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace ellidyn
