// JSON / CSV emission helpers for the command-line tool.
#ifndef HOLOMEM_TOOLS_OUTPUT_HPP
#define HOLOMEM_TOOLS_OUTPUT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <holomem/core.hpp>

namespace holomem::tools {

using Json = nlohmann::json;

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const CVector& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(to_json(v(i)));
    return out;
}

template <class Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m)
{
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(to_json(Complex(m(r, c))));
        out.push_back(std::move(row));
    }
    return out;
}

inline std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Comma-separated, header row, LF line ends.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary), columns_(header.size())
    {
        if (!out_)
            throw Error("cannot write " + path.string());
        write_row(header);
    }

    void write_row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << (i ? "," : "") << cells[i];
        for (std::size_t i = cells.size(); i < columns_; ++i)
            out_ << ",";
        out_ << '\n';
    }

private:
    std::ofstream out_;
    std::size_t columns_;
};

inline void write_json(const std::filesystem::path& path, const Json& j)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace holomem::tools

#endif
