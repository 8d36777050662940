#include "speckle/image.hpp"

#include <cctype>
#include <fstream>

namespace speckle {
namespace {

// Skips whitespace and '#' comment lines, then reads one ASCII token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) continue;
        tok.push_back(static_cast<char>(c));
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
            tok.push_back(static_cast<char>(in.get()));
        break;
    }
    return tok;
}

}  // namespace

void write_pgm(const SpeckleImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open PGM for writing");
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.pixels()));
    if (!out) throw IoError(path.string(), "failed writing PGM data");
}

SpeckleImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open PGM for reading");
    if (next_token(in) != "P5") throw IoError(path.string(), "not a binary PGM (P5)");
    Dims dims;
    int maxval = 0;
    try {
        dims.width = std::stoi(next_token(in));
        dims.height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw IoError(path.string(), "malformed PGM header");
    }
    if (!dims.positive()) throw IoError(path.string(), "PGM dims out of range");
    if (maxval != 255) throw IoError(path.string(), "PGM maxval must be 255");
    in.get();  // single whitespace after maxval
    SpeckleImage img(dims);
    in.read(reinterpret_cast<char*>(img.data().data()),
            static_cast<std::streamsize>(img.pixels()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels()))
        throw IoError(path.string(), "truncated PGM data");
    return img;
}

}  // namespace speckle
