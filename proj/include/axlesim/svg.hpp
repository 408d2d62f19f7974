#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace axlesim::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartLabels {
    std::string title;
    std::string x_axis;
    std::string y_axis;
};

/// Static line chart with linear axes and a legend.
void write_line_chart(std::ostream& out, const std::vector<Series>& series, const ChartLabels& labels);

/// Heatmap of values in [0, 1] with row/column labels and the value printed in each cell.
void write_heatmap(std::ostream& out, const std::vector<std::vector<double>>& values,
                   const std::vector<std::string>& row_labels, const std::vector<std::string>& column_labels,
                   const std::string& title);

} // namespace axlesim::svg
