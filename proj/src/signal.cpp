#include "seamsentinel/signal.hpp"

#include <cmath>
#include <sstream>

#include "seamsentinel/error.hpp"
#include "seamsentinel/textio.hpp"

namespace seam {

std::string to_string(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    fail(ErrorKind::Validation, "invalid axis");
}

Axis axis_from_string(const std::string& name) {
    if (name == "x" || name == "X") return Axis::X;
    if (name == "y" || name == "Y") return Axis::Y;
    if (name == "z" || name == "Z") return Axis::Z;
    fail(ErrorKind::Config, "unknown axis '" + name + "' (expected x, y or z)");
}

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::Wear: return "wear";
        case Scenario::BladeDefect: return "blade_defect";
        case Scenario::Stability: return "stability";
        case Scenario::Belt: return "belt";
    }
    fail(ErrorKind::Validation, "invalid scenario");
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "wear") return Scenario::Wear;
    if (name == "blade_defect") return Scenario::BladeDefect;
    if (name == "stability") return Scenario::Stability;
    if (name == "belt") return Scenario::Belt;
    fail(ErrorKind::Config, "unknown scenario '" + name +
                                "' (expected wear, blade_defect, stability or belt)");
}

int class_count(Scenario scenario) {
    switch (scenario) {
        case Scenario::Wear: return 2;
        case Scenario::BladeDefect: return 3;
        case Scenario::Stability: return 2;
        case Scenario::Belt: return 3;
    }
    fail(ErrorKind::Validation, "invalid scenario");
}

std::string class_name(Scenario scenario, int class_id) {
    static const char* kWear[] = {"fresh", "worn"};
    static const char* kDefect[] = {"normal", "two_worn", "six_worn"};
    static const char* kStability[] = {"stable", "unstable"};
    static const char* kBelt[] = {"fixed", "partly_loose", "extremely_loose"};
    ConditionLabel{scenario, class_id}.validate();
    switch (scenario) {
        case Scenario::Wear: return kWear[class_id];
        case Scenario::BladeDefect: return kDefect[class_id];
        case Scenario::Stability: return kStability[class_id];
        case Scenario::Belt: return kBelt[class_id];
    }
    fail(ErrorKind::Validation, "invalid scenario");
}

void ConditionLabel::validate() const {
    if (class_id < 0 || class_id >= class_count(scenario))
        fail(ErrorKind::Validation,
             "class_id " + format_int(class_id) + " out of range for scenario " +
                 to_string(scenario));
}

double AccelerationRecording::duration_s() const {
    return static_cast<double>(samples()) / sample_rate_hz;
}

const std::vector<double>& AccelerationRecording::axis(Axis a) const {
    switch (a) {
        case Axis::X: return x;
        case Axis::Y: return y;
        case Axis::Z: return z;
    }
    fail(ErrorKind::Validation, "invalid axis");
}

std::vector<double>& AccelerationRecording::axis(Axis a) {
    switch (a) {
        case Axis::X: return x;
        case Axis::Y: return y;
        case Axis::Z: return z;
    }
    fail(ErrorKind::Validation, "invalid axis");
}

void AccelerationRecording::validate() const {
    if (sample_rate_hz <= 0) fail(ErrorKind::Validation, "sample_rate_hz must be positive");
    if (x.empty()) fail(ErrorKind::Validation, "empty recording");
    if (x.size() != y.size() || y.size() != z.size())
        fail(ErrorKind::Validation, "axis lengths differ");
    if (meta.rpm < 0) fail(ErrorKind::Validation, "rpm must be >= 0");
    if (meta.blade_count < 1) fail(ErrorKind::Validation, "blade_count must be >= 1");
    if (condition) condition->validate();
}

namespace {

void apply_directive(AccelerationRecording& rec, const std::string& key,
                     const std::string& value, std::size_t line_no,
                     const std::string& file) {
    const std::string ctx = file + ": line " + format_int(static_cast<long long>(line_no));
    if (key == "sample_rate_hz") {
        const long long v = parse_int(value, ctx);
        if (v <= 0) fail(ErrorKind::Format, ctx + ": sample_rate_hz must be positive");
        rec.sample_rate_hz = static_cast<int>(v);
    } else if (key == "rpm") {
        rec.meta.rpm = parse_double(value, ctx);
    } else if (key == "feed_mm_per_min") {
        rec.meta.feed_mm_per_min = parse_double(value, ctx);
    } else if (key == "cut_depth_mm") {
        rec.meta.cut_depth_mm = parse_double(value, ctx);
    } else if (key == "blade_count") {
        rec.meta.blade_count = static_cast<int>(parse_int(value, ctx));
    } else if (key == "idle") {
        const long long v = parse_int(value, ctx);
        if (v != 0 && v != 1) fail(ErrorKind::Format, ctx + ": idle must be 0 or 1");
        rec.meta.idle = v == 1;
    } else if (key == "scenario") {
        if (!rec.condition) rec.condition = ConditionLabel{};
        rec.condition->scenario = scenario_from_string(value);
    } else if (key == "class_id") {
        if (!rec.condition) rec.condition = ConditionLabel{};
        rec.condition->class_id = static_cast<int>(parse_int(value, ctx));
    } else if (key == "seed") {
        rec.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
    } else if (key == "config_hash") {
        rec.config_hash = value;
    }
    // unrecognized directives are ignored for forward compatibility
}

}  // namespace

AccelerationRecording load_recording(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const std::string file = path.string();

    AccelerationRecording rec;
    bool have_rate = false;
    bool have_scenario = false;
    bool have_class = false;
    bool header_seen = false;
    std::size_t line_no = 0;

    for (const auto raw_line : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw_line);
        if (line.empty()) continue;
        const std::string ctx = file + ": line " + format_int(static_cast<long long>(line_no));
        if (line.front() == '#') {
            if (header_seen)
                fail(ErrorKind::Format, ctx + ": directive after data header");
            const auto body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos)
                fail(ErrorKind::Format, ctx + ": malformed directive (expected key=value)");
            const std::string key{trim(body.substr(0, eq))};
            const std::string value{trim(body.substr(eq + 1))};
            if (key == "sample_rate_hz") have_rate = true;
            if (key == "scenario") have_scenario = true;
            if (key == "class_id") have_class = true;
            apply_directive(rec, key, value, line_no, file);
            continue;
        }
        if (!header_seen) {
            if (line != "x,y,z")
                fail(ErrorKind::Format, ctx + ": expected header 'x,y,z'");
            header_seen = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 3)
            fail(ErrorKind::Format, ctx + ": expected 3 values, got " +
                                        format_int(static_cast<long long>(cells.size())));
        rec.x.push_back(parse_double(cells[0], ctx));
        rec.y.push_back(parse_double(cells[1], ctx));
        rec.z.push_back(parse_double(cells[2], ctx));
    }

    if (!have_rate)
        fail(ErrorKind::Format, file + ": missing '# sample_rate_hz=<int>' directive");
    if (!header_seen) fail(ErrorKind::Format, file + ": missing 'x,y,z' header");
    if (rec.x.empty()) fail(ErrorKind::Format, file + ": empty recording");
    if (have_scenario != have_class)
        fail(ErrorKind::Format, file + ": scenario and class_id directives must appear together");
    rec.validate();
    return rec;
}

void save_recording(const AccelerationRecording& rec, const std::filesystem::path& path) {
    rec.validate();
    std::string out;
    out.reserve(rec.samples() * 24 + 256);
    out += "# sample_rate_hz=" + format_int(rec.sample_rate_hz) + "\n";
    out += "# rpm=" + format_double(rec.meta.rpm) + "\n";
    out += "# feed_mm_per_min=" + format_double(rec.meta.feed_mm_per_min) + "\n";
    out += "# cut_depth_mm=" + format_double(rec.meta.cut_depth_mm) + "\n";
    out += "# idle=" + std::string(rec.meta.idle ? "1" : "0") + "\n";
    if (rec.condition) {
        out += "# scenario=" + to_string(rec.condition->scenario) + "\n";
        out += "# class_id=" + format_int(rec.condition->class_id) + "\n";
    }
    if (rec.seed)
        out += "# seed=" + format_int(static_cast<long long>(*rec.seed)) + "\n";
    if (rec.config_hash) out += "# config_hash=" + *rec.config_hash + "\n";
    out += "x,y,z\n";
    for (std::size_t i = 0; i < rec.samples(); ++i) {
        out += format_double(rec.x[i]);
        out += ',';
        out += format_double(rec.y[i]);
        out += ',';
        out += format_double(rec.z[i]);
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<Window> segment_windows(const AccelerationRecording& rec, Axis axis,
                                    double window_seconds) {
    rec.validate();
    if (!(window_seconds > 0))
        fail(ErrorKind::Validation, "window_seconds must be positive");
    const double exact = window_seconds * rec.sample_rate_hz;
    const long long length = std::llround(exact);
    if (length < 1 || std::fabs(exact - static_cast<double>(length)) > 1e-9)
        fail(ErrorKind::Validation,
             "window_seconds * sample_rate_hz must be a whole number of samples >= 1");

    const auto& source = rec.axis(axis);
    const std::size_t win_len = static_cast<std::size_t>(length);
    const std::size_t count = source.size() / win_len;

    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Window w;
        w.samples.assign(source.begin() + static_cast<std::ptrdiff_t>(i * win_len),
                         source.begin() + static_cast<std::ptrdiff_t>((i + 1) * win_len));
        w.axis = axis;
        w.sample_rate_hz = rec.sample_rate_hz;
        w.source_offset_s =
            static_cast<double>(i * win_len) / rec.sample_rate_hz;
        windows.push_back(std::move(w));
    }
    return windows;
}

std::vector<LabeledWindow> label_windows_by_time(const std::vector<Window>& windows,
                                                 double early_span_s, double late_span_s,
                                                 const ConditionLabel& early_label,
                                                 const ConditionLabel& late_label) {
    early_label.validate();
    late_label.validate();
    if (early_span_s < 0 || late_span_s < 0)
        fail(ErrorKind::Validation, "label spans must be non-negative");

    double total = 0.0;
    for (const auto& w : windows)
        total = std::max(total, w.source_offset_s + w.duration_s());
    constexpr double kEps = 1e-9;
    if (early_span_s + late_span_s > total + kEps)
        fail(ErrorKind::Validation, "ambiguous labeling: spans overlap (" +
                                        format_double(early_span_s) + " s + " +
                                        format_double(late_span_s) + " s > " +
                                        format_double(total) + " s)");

    std::vector<LabeledWindow> labeled;
    for (const auto& w : windows) {
        const double begin = w.source_offset_s;
        const double end = begin + w.duration_s();
        if (end <= early_span_s + kEps) {
            labeled.push_back({w, early_label});
        } else if (begin + kEps >= total - late_span_s) {
            labeled.push_back({w, late_label});
        }
    }
    return labeled;
}

}  // namespace seam
