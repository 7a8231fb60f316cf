// Builds every preset, prints its verdict and pressures, and writes the
// cluster JSON and an SVG picture of each into the given directory.

#include <filesystem>
#include <iostream>

#include "foamlab/foamlab.hpp"

int main(int argc, char** argv) {
  using namespace foamlab;
  const std::filesystem::path dir = argc > 1 ? argv[1] : "tour";
  std::filesystem::create_directories(dir);
  SvgStyle style;
  style.fill_by_pressure = true;
  for (const auto& name : preset_names()) {
    const Cluster c = make_preset(name);
    const Classification k = classify(c);
    std::cout << name << ": " << to_string(k.verdict) << ", n = " << c.region_count;
    if (k.verdict == Verdict::Equilibrium) {
      const PressureVector p = pressures(c);
      std::cout << ", pressures";
      for (int r = 1; r <= c.region_count; ++r) std::cout << " " << p.values[r];
    }
    std::cout << "\n";
    save_text((dir / (name + ".json")).string(), to_json_text(c));
    SvgStyle s = style;
    s.fill_by_pressure = k.verdict == Verdict::Equilibrium;
    save_text((dir / (name + ".svg")).string(), to_svg(c, s));
  }
  std::cout << "wrote " << preset_names().size() << " presets to " << dir.string() << "\n";
  return 0;
}
