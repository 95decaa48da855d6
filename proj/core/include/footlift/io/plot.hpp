#pragma once

#include <string>
#include <vector>

namespace footlift::io {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

// Fixed-size vector plot with axes, tick labels and a legend; output bytes
// are a pure function of the input.
std::string render_svg(const std::vector<Series>& series,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel);

// Long-form CSV: series,x,y.
std::string tidy_csv(const std::vector<Series>& series);

// Loss and AJAE curves from a training log CSV.
std::vector<Series> series_from_training_csv(const std::string& text,
                                             const std::string& source_name);

// Per-frame AJAE traces from an eval report JSON.
std::vector<Series> series_from_eval_report(const std::string& json_text);

}  // namespace footlift::io
