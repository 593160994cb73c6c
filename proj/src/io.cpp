#include "grushin/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "grushin/error.hpp"

namespace grushin::io {

static_assert(std::endian::native == std::endian::little, "binary layout assumes a little-endian host");

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
public:
    explicit Writer(const std::string& path) : os_(path, std::ios::binary) {
        if (!os_) throw Error("cannot open " + path + " for writing");
    }
    template <class T>
    void put(T v) {
        os_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void bytes(const void* p, std::size_t n) { os_.write(static_cast<const char*>(p), std::streamsize(n)); }
    void finish(const std::string& path) {
        os_.flush();
        if (!os_) throw Error("write failed: " + path);
    }

private:
    std::ofstream os_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : is_(path, std::ios::binary), path_(path) {
        if (!is_) throw Error("cannot open " + path);
    }
    template <class T>
    T get() {
        T v{};
        is_.read(reinterpret_cast<char*>(&v), sizeof(T));
        if (!is_) throw Error("truncated file: " + path_);
        return v;
    }
    void bytes(void* p, std::size_t n) {
        is_.read(static_cast<char*>(p), std::streamsize(n));
        if (!is_) throw Error("truncated file: " + path_);
    }
    void magic(const char* m) {
        char buf[4];
        bytes(buf, 4);
        if (std::memcmp(buf, m, 4) != 0) throw Error(path_ + ": bad magic, expected " + std::string(m, 4));
        if (get<std::uint32_t>() != kVersion) throw Error(path_ + ": unsupported version");
    }

private:
    std::ifstream is_;
    std::string path_;
};

void put_axis(Writer& w, const UniformAxis& a) {
    w.put<std::uint64_t>(a.n);
    w.put<double>(a.start);
    w.put<double>(a.step);
}

UniformAxis get_axis(Reader& r) {
    UniformAxis a;
    a.n = std::size_t(r.get<std::uint64_t>());
    a.start = r.get<double>();
    a.step = r.get<double>();
    return a;
}

nlohmann::ordered_json axis_json(const UniformAxis& a) {
    return {{"n", a.n}, {"start", a.start}, {"step", a.step}};
}

void write_sidecar(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream os(path + ".json");
    if (!os) throw Error("cannot open " + path + ".json for writing");
    os << j.dump(2) << '\n';
}

}  // namespace

void write_field(const std::string& path, const SampledField& f) {
    if (f.values.size() != f.nx() * f.nt()) throw GridMismatch("write_field: value count does not match the grid");
    Writer w(path);
    w.bytes("GRSF", 4);
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint32_t>(f.d1());
    w.put<std::uint32_t>(f.d2());
    for (const auto& a : f.grid.x) put_axis(w, a);
    for (const auto& a : f.grid.t) put_axis(w, a);
    w.bytes(f.values.data(), f.values.size() * sizeof(cplx));
    w.finish(path);

    nlohmann::ordered_json j;
    j["format"] = "GRSF";
    j["version"] = kVersion;
    j["d1"] = f.d1();
    j["d2"] = f.d2();
    j["x_axes"] = nlohmann::ordered_json::array();
    for (const auto& a : f.grid.x) j["x_axes"].push_back(axis_json(a));
    j["t_axes"] = nlohmann::ordered_json::array();
    for (const auto& a : f.grid.t) j["t_axes"].push_back(axis_json(a));
    j["layout"] = "complex128 little-endian, index ix * n_t + it, last axis fastest";
    write_sidecar(path, j);
}

SampledField read_field(const std::string& path) {
    Reader r(path);
    r.magic("GRSF");
    const auto d1 = r.get<std::uint32_t>(), d2 = r.get<std::uint32_t>();
    if (d1 > 8 || d2 > 3) throw Error(path + ": implausible dimensions");
    FieldGrid g;
    for (std::uint32_t i = 0; i < d1; ++i) g.x.push_back(get_axis(r));
    for (std::uint32_t i = 0; i < d2; ++i) g.t.push_back(get_axis(r));
    SampledField f(g);
    r.bytes(f.values.data(), f.values.size() * sizeof(cplx));
    return f;
}

void write_kernel(const std::string& path, const spectral::ProjectionKernel& k) {
    const std::size_t n = k.grid.size();
    if (std::size_t(k.values.rows()) != n || std::size_t(k.values.cols()) != n)
        throw GridMismatch("write_kernel: kernel shape does not match the grid");
    Writer w(path);
    w.bytes("GRKN", 4);
    w.put<std::uint32_t>(kVersion);
    w.put<std::uint32_t>(k.k);
    w.put<double>(k.a);
    w.put<std::uint32_t>(k.route == spectral::KernelRoute::Eigensum ? 0u : 1u);
    w.put<std::uint32_t>(k.grid.dim());
    for (const auto& ax : k.grid.axes) {
        w.put<std::uint64_t>(ax.size());
        w.bytes(ax.nodes.data(), ax.size() * sizeof(double));
        w.bytes(ax.weights.data(), ax.size() * sizeof(double));
    }
    // Eigen is column-major; write row-major
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = k.values;
    w.bytes(rm.data(), n * n * sizeof(cplx));
    w.finish(path);

    nlohmann::ordered_json j;
    j["format"] = "GRKN";
    j["version"] = kVersion;
    j["k"] = k.k;
    j["a"] = k.a;
    j["route"] = spectral::to_string(k.route);
    j["dim"] = k.grid.dim();
    j["axis_sizes"] = nlohmann::ordered_json::array();
    for (const auto& ax : k.grid.axes) j["axis_sizes"].push_back(ax.size());
    j["layout"] = "complex128 little-endian, row-major (x_i, y_j)";
    write_sidecar(path, j);
}

spectral::ProjectionKernel read_kernel(const std::string& path) {
    Reader r(path);
    r.magic("GRKN");
    spectral::ProjectionKernel k;
    k.k = r.get<std::uint32_t>();
    k.a = r.get<double>();
    k.route = r.get<std::uint32_t>() == 0 ? spectral::KernelRoute::Eigensum : spectral::KernelRoute::Laguerre;
    const auto dim = r.get<std::uint32_t>();
    if (dim > 8) throw Error(path + ": implausible dimension");
    for (std::uint32_t d = 0; d < dim; ++d) {
        Quadrature1D q;
        const auto n = std::size_t(r.get<std::uint64_t>());
        q.nodes.resize(n);
        q.weights.resize(n);
        r.bytes(q.nodes.data(), n * sizeof(double));
        r.bytes(q.weights.data(), n * sizeof(double));
        k.grid.axes.push_back(std::move(q));
    }
    const std::size_t n = k.grid.size();
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(static_cast<Eigen::Index>(n),
                                                                            static_cast<Eigen::Index>(n));
    r.bytes(rm.data(), n * n * sizeof(cplx));
    k.values = rm;
    return k;
}

}  // namespace grushin::io
