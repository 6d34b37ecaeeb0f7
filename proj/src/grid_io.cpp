#include "beltrami/grid_io.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace qc {

using json = nlohmann::json;

namespace {

json mask_rle(const std::vector<std::uint8_t>& mask) {
    // Alternating run lengths, starting with a (possibly zero) run of 0s.
    json runs = json::array();
    std::uint8_t cur = 0;
    std::size_t len = 0;
    for (std::uint8_t m : mask) {
        std::uint8_t bit = m ? 1 : 0;
        if (bit == cur) {
            ++len;
        } else {
            runs.push_back(len);
            cur = bit;
            len = 1;
        }
    }
    runs.push_back(len);
    return runs;
}

std::vector<std::uint8_t> mask_from_rle(const json& runs, std::size_t total) {
    std::vector<std::uint8_t> mask;
    mask.reserve(total);
    std::uint8_t cur = 0;
    for (const auto& r : runs) {
        std::size_t len = r.get<std::size_t>();
        mask.insert(mask.end(), len, cur);
        cur = cur ? 0 : 1;
    }
    if (mask.size() != total)
        throw invalid_input("grid file: mask run lengths do not cover the lattice");
    return mask;
}

json header_for(const GridSpec& g, bool is_complex) {
    json h;
    h["format"] = "qcgrid";
    h["version"] = 1;
    h["kind"] = is_complex ? "complex" : "real";
    h["nx"] = g.nx();
    h["ny"] = g.ny();
    h["origin"] = {g.origin().real(), g.origin().imag()};
    h["width"] = g.width();
    h["height"] = g.height();
    h["mask_rle"] = mask_rle(g.mask());
    return h;
}

void write_file(const std::string& path, const GridSpec& g, bool is_complex,
                const std::vector<double>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("cannot open grid file for writing: " + path);
    std::string header = header_for(g, is_complex).dump();
    std::uint32_t len = static_cast<std::uint32_t>(header.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(header.data(), header.size());
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!out) throw numeric_failure("short write on grid file: " + path);
}

}  // namespace

void write_grid_file(const std::string& path, const RealField& f) {
    write_file(path, f.grid(), false, f.values());
}

void write_grid_file(const std::string& path, const ComplexField& f) {
    std::vector<double> payload(2 * f.values().size());
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        payload[2 * k] = f.values()[k].real();
        payload[2 * k + 1] = f.values()[k].imag();
    }
    write_file(path, f.grid(), true, payload);
}

GridFileContents read_grid_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open grid file: " + path);
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    if (!in || len == 0 || len > (1u << 24))
        throw invalid_input("grid file: bad header length");
    std::string header(len, '\0');
    in.read(header.data(), len);
    if (!in) throw invalid_input("grid file: truncated header");

    json h = json::parse(header, nullptr, false);
    if (h.is_discarded() || h.value("format", "") != "qcgrid")
        throw invalid_input("grid file: not a qcgrid header");
    int nx = h.at("nx").get<int>();
    int ny = h.at("ny").get<int>();
    cplx origin(h.at("origin")[0].get<double>(), h.at("origin")[1].get<double>());
    double width = h.at("width").get<double>();
    double height = h.at("height").get<double>();
    bool is_complex = h.at("kind").get<std::string>() == "complex";
    std::size_t total = static_cast<std::size_t>(nx) * ny;
    auto mask = mask_from_rle(h.at("mask_rle"), total);
    GridSpec grid(origin, width, height, nx, ny, std::move(mask));

    std::size_t doubles = total * (is_complex ? 2 : 1);
    std::vector<double> payload(doubles);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(doubles * sizeof(double)));
    if (!in) throw invalid_input("grid file: truncated payload");

    GridFileContents out{std::move(grid), is_complex, {}, {}};
    if (is_complex) {
        out.complex_values.resize(total);
        for (std::size_t k = 0; k < total; ++k)
            out.complex_values[k] = cplx(payload[2 * k], payload[2 * k + 1]);
    } else {
        out.real_values = std::move(payload);
    }
    return out;
}

RealField read_real_grid_file(const std::string& path) {
    GridFileContents c = read_grid_file(path);
    if (c.is_complex) throw invalid_input("grid file holds complex samples: " + path);
    return RealField(std::move(c.grid), std::move(c.real_values));
}

ComplexField read_complex_grid_file(const std::string& path) {
    GridFileContents c = read_grid_file(path);
    if (!c.is_complex) throw invalid_input("grid file holds real samples: " + path);
    return ComplexField(std::move(c.grid), std::move(c.complex_values));
}

void write_grid_csv(const std::string& path, const RealField& f) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open csv for writing: " + path);
    out << "x,y,value\n";
    out.precision(17);
    const GridSpec& g = f.grid();
    for (int iy = 0; iy < g.ny(); ++iy)
        for (int ix = 0; ix < g.nx(); ++ix) {
            int k = g.index(ix, iy);
            if (!g.masked(k)) continue;
            cplx z = g.point(ix, iy);
            out << z.real() << ',' << z.imag() << ',' << f[k] << '\n';
        }
}

void write_grid_csv(const std::string& path, const ComplexField& f) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot open csv for writing: " + path);
    out << "x,y,re,im\n";
    out.precision(17);
    const GridSpec& g = f.grid();
    for (int iy = 0; iy < g.ny(); ++iy)
        for (int ix = 0; ix < g.nx(); ++ix) {
            int k = g.index(ix, iy);
            if (!g.masked(k)) continue;
            cplx z = g.point(ix, iy);
            out << z.real() << ',' << z.imag() << ',' << f[k].real() << ','
                << f[k].imag() << '\n';
        }
}

}  // namespace qc
