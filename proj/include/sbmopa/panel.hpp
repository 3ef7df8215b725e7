#pragma once

#include <string>
#include <vector>

namespace sbmopa {

enum class VariableRole { Input, Output };

struct PanelVariable {
    std::string name;
    VariableRole role = VariableRole::Input;
    std::string unit;
};

struct VariableStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation (n-1)
};

// One cross-section of assessment units: data[i][j] holds the value of
// variable j for unit i. All values must be strictly positive; score and
// weight formulas divide by column aggregates.
class DmuPanel {
public:
    DmuPanel() = default;
    DmuPanel(std::vector<std::string> dmu_ids, std::vector<PanelVariable> variables,
             std::vector<std::vector<double>> data);

    // Throws ValidationError with row/column coordinates on nonpositive or
    // non-finite cells, duplicate ids, or a missing input/output side.
    void validate() const;

    int dmu_count() const { return static_cast<int>(dmu_ids_.size()); }
    int variable_count() const { return static_cast<int>(variables_.size()); }
    int input_count() const { return static_cast<int>(inputs_.size()); }
    int output_count() const { return static_cast<int>(outputs_.size()); }

    const std::vector<std::string>& dmu_ids() const { return dmu_ids_; }
    const std::vector<PanelVariable>& variables() const { return variables_; }
    const std::vector<int>& input_indices() const { return inputs_; }
    const std::vector<int>& output_indices() const { return outputs_; }

    double value(int dmu, int variable) const { return data_[dmu][variable]; }
    const std::vector<double>& row(int dmu) const { return data_[dmu]; }
    std::vector<double> column(int variable) const;

    double column_min(int variable) const;
    double column_max(int variable) const;
    double column_mean(int variable) const;

    int find_dmu(const std::string& id) const;        // -1 when absent
    int find_variable(const std::string& name) const;  // -1 when absent

    std::vector<VariableStats> stats() const;

    // Copy with x -> 1/x applied to the named columns. Used to fold an
    // undesirable output into the model as "more is better"; off by default
    // everywhere.
    DmuPanel with_reciprocal(const std::vector<std::string>& variable_names) const;

private:
    std::vector<std::string> dmu_ids_;
    std::vector<PanelVariable> variables_;
    std::vector<std::vector<double>> data_;
    std::vector<int> inputs_;
    std::vector<int> outputs_;
};

} // namespace sbmopa
