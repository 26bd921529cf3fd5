#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "optopix/core_model.hpp"
#include "optopix/display.hpp"
#include "optopix/mechanics.hpp"

namespace optopix {

/// A fully resolved pixel description as loaded from a JSON config.
struct PixelConfig {
  PixelGeometry geometry;
  MaterialProperties absorber = MaterialProperties::pgs();
  MaterialProperties membrane = MaterialProperties::ecoflex0010();
  GasState gas;
  OpticalInput optics;
  double compliance_scale = 1.0;
  double eval_temperature = 300.0;
  PressureModel pressure_model = PressureModel::isometric;
  /// Every file read while resolving this config, in load order.
  std::vector<std::string> sources;

  ThermalNetwork network() const;
  MechanicsContext mechanics() const;
  PixelModel pixel_model() const { return {network(), mechanics()}; }
};

/// Preset search path: $OPTOPIX_CONFIG_DIR (if set), then the directory of
/// the referring file, then the built-in preset directory.
std::vector<std::filesystem::path> preset_search_path(
    const std::filesystem::path& referring_dir = {});

/// Resolves a path or bare preset name ("pgs", "paper_pixel_w020.json").
/// Throws Error{validation, "config-not-found"}.
std::filesystem::path resolve_preset(const std::string& name,
                                     const std::filesystem::path& referring_dir = {});

/// Strict loader: unknown keys and type mismatches throw
/// Error{validation, "invalid-config"}; malformed JSON throws
/// Error{validation, "malformed-json"}.
PixelConfig load_pixel_config(const std::string& path_or_name);
PixelConfig parse_pixel_config(const std::string& json_text,
                               const std::filesystem::path& base_dir = {});

MaterialProperties load_material(const std::string& path_or_name,
                                 const std::filesystem::path& referring_dir = {});

struct PatternFile {
  DisplayLayout layout;
  TactilePattern pattern;
};

/// Pattern file with "layout" and "events" keys.
PatternFile load_pattern_file(const std::string& path);
PatternFile parse_pattern(const std::string& json_text);
std::string pattern_to_json(const DisplayLayout& layout, const TactilePattern& pattern);

/// Serialises the config in the same schema the loader accepts, with
/// materials inlined.
std::string pixel_config_to_json(const PixelConfig& config);

}  // namespace optopix
