#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace seam {

enum class Axis { X, Y, Z };

std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

enum class Scenario { Wear, BladeDefect, Stability, Belt };

std::string to_string(Scenario scenario);
Scenario scenario_from_string(const std::string& name);
int class_count(Scenario scenario);
std::string class_name(Scenario scenario, int class_id);

struct ConditionLabel {
    Scenario scenario = Scenario::Wear;
    int class_id = 0;

    void validate() const;
    bool operator==(const ConditionLabel&) const = default;
};

struct MachineSettings {
    double rpm = 0.0;
    double feed_mm_per_min = 0.0;
    double cut_depth_mm = 0.0;
    int blade_count = 32;
    bool idle = false;
};

// Triaxial time series at a fixed sample rate. Immutable by convention once
// built; all downstream operations take it by const reference.
struct AccelerationRecording {
    int sample_rate_hz = 0;
    std::vector<double> x, y, z;
    MachineSettings meta;
    std::optional<ConditionLabel> condition;
    std::optional<std::uint64_t> seed;          // present on simulator output
    std::optional<std::string> config_hash;     // pipeline provenance

    std::size_t samples() const { return x.size(); }
    double duration_s() const;
    const std::vector<double>& axis(Axis a) const;
    std::vector<double>& axis(Axis a);
    void validate() const;
};

struct Window {
    std::vector<double> samples;
    Axis axis = Axis::Y;
    double source_offset_s = 0.0;
    int sample_rate_hz = 0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

struct LabeledWindow {
    Window window;
    ConditionLabel label;
};

AccelerationRecording load_recording(const std::filesystem::path& path);
void save_recording(const AccelerationRecording& rec, const std::filesystem::path& path);

// Non-overlapping windows in temporal order; a trailing partial window is
// discarded. window_seconds * sample_rate_hz must be a whole number >= 1.
std::vector<Window> segment_windows(const AccelerationRecording& rec, Axis axis,
                                    double window_seconds = 1.0);

// Windows fully inside the first early_span_s get early_label, those fully
// inside the trailing late_span_s get late_label, windows in between are
// dropped. The spans must not overlap.
std::vector<LabeledWindow> label_windows_by_time(const std::vector<Window>& windows,
                                                 double early_span_s, double late_span_s,
                                                 const ConditionLabel& early_label,
                                                 const ConditionLabel& late_label);

}  // namespace seam
