#include "ipm/trajectory_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ipm {

namespace {

constexpr std::array<char, 4> kMagic{'I', 'P', 'M', 'S'};

template <typename T>
void put(std::ostream& os, T value) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    std::array<unsigned char, sizeof(T)> bytes;
    is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if (!is) throw std::runtime_error("read_trajectory: truncated input");
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_trajectory(std::ostream& os, const Trajectory& traj) {
    if (traj.data.size() != static_cast<std::size_t>(traj.dims) * traj.N * traj.points()) {
        throw std::invalid_argument("write_trajectory: data size does not match header");
    }
    os.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(os, kTrajectoryVersion);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(traj.dims));
    put<std::uint64_t>(os, traj.N);
    put<std::uint64_t>(os, traj.steps);
    put<double>(os, traj.h);
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(traj.data.data()),
                 static_cast<std::streamsize>(traj.data.size() * sizeof(double)));
    } else {
        for (double v : traj.data) put<double>(os, v);
    }
    if (!os) throw std::runtime_error("write_trajectory: write failed");
}

Trajectory read_trajectory(std::istream& is) {
    std::array<char, 4> magic{};
    is.read(magic.data(), magic.size());
    if (!is || magic != kMagic) throw std::runtime_error("read_trajectory: bad magic");
    const auto version = get<std::uint32_t>(is);
    if (version != kTrajectoryVersion) {
        throw std::runtime_error("read_trajectory: unsupported version " + std::to_string(version));
    }
    Trajectory traj;
    traj.dims = get<std::uint8_t>(is);
    if (traj.dims != 1 && traj.dims != 2) throw std::runtime_error("read_trajectory: dims must be 1 or 2");
    traj.N = get<std::uint64_t>(is);
    traj.steps = get<std::uint64_t>(is);
    traj.h = get<double>(is);
    if (traj.N == 0 || !(traj.h > 0.0)) throw std::runtime_error("read_trajectory: invalid header");
    const std::size_t count = static_cast<std::size_t>(traj.dims) * traj.N * traj.points();
    traj.data.resize(count);
    if constexpr (std::endian::native == std::endian::little) {
        is.read(reinterpret_cast<char*>(traj.data.data()), static_cast<std::streamsize>(count * sizeof(double)));
        if (!is) throw std::runtime_error("read_trajectory: truncated data");
    } else {
        for (double& v : traj.data) v = get<double>(is);
    }
    return traj;
}

void write_trajectory(const std::filesystem::path& file, const Trajectory& traj) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
    write_trajectory(os, traj);
}

Trajectory read_trajectory(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + file.string());
    return read_trajectory(is);
}

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
    os.imbue(std::locale::classic());
    os.precision(std::numeric_limits<double>::max_digits10);
    os << 't';
    const char names[2] = {'x', 'y'};
    for (int d = 0; d < traj.dims; ++d) {
        for (std::size_t n = 0; n < traj.N; ++n) os << ',' << names[d] << '_' << n;
    }
    os << '\n';
    for (std::size_t t = 0; t < traj.points(); ++t) {
        os << static_cast<double>(t) * traj.h;
        for (int d = 0; d < traj.dims; ++d) {
            for (std::size_t n = 0; n < traj.N; ++n) os << ',' << traj.path(d, n)[t];
        }
        os << '\n';
    }
}

}  // namespace ipm
