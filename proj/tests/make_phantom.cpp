// Writes N synthetic fundus images, their vessel masks and a custom manifest.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "support/phantom.hpp"
#include "vesselmat/imgio.hpp"

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: make_phantom <dir> [count] [size]\n";
        return 2;
    }
    namespace fs = std::filesystem;
    const fs::path dir = argv[1];
    const int count = argc > 2 ? std::stoi(argv[2]) : 2;
    const int size = argc > 3 ? std::stoi(argv[3]) : 160;
    fs::create_directories(dir);
    std::ofstream manifest(dir / "manifest.tsv");
    for (int k = 0; k < count; ++k) {
        const auto f = phantom::make_fundus(size, 100 + k);
        const std::string id = "ph" + std::to_string(k);
        vesselmat::save_png(dir / (id + ".png"), f.image);
        vesselmat::Image<std::uint8_t> gt(size, size);
        for (std::size_t i = 0; i < gt.size(); ++i)
            gt[i] = f.vessels[i] ? 255 : 0;
        vesselmat::save_png(dir / (id + "_gt.png"), gt);
        manifest << id << ".png\t" << id << "_gt.png\n";
    }
    return 0;
}
