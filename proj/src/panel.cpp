#include "sbmopa/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sbmopa/errors.hpp"

namespace sbmopa {

DmuPanel::DmuPanel(std::vector<std::string> dmu_ids, std::vector<PanelVariable> variables,
                   std::vector<std::vector<double>> data)
    : dmu_ids_(std::move(dmu_ids)), variables_(std::move(variables)), data_(std::move(data)) {
    for (int j = 0; j < variable_count(); ++j) {
        (variables_[j].role == VariableRole::Input ? inputs_ : outputs_).push_back(j);
    }
    validate();
}

void DmuPanel::validate() const {
    if (dmu_ids_.empty()) throw ValidationError("panel has no rows");
    if (inputs_.empty()) throw ValidationError("panel declares no input variable");
    if (outputs_.empty()) throw ValidationError("panel declares no output variable");

    std::set<std::string> seen;
    for (const auto& id : dmu_ids_) {
        if (!seen.insert(id).second) throw ValidationError("duplicate dmu id '" + id + "'");
    }
    std::set<std::string> names;
    for (const auto& v : variables_) {
        if (!names.insert(v.name).second) {
            throw ValidationError("duplicate variable name '" + v.name + "'");
        }
    }
    if (data_.size() != dmu_ids_.size()) {
        throw ValidationError("panel row count does not match dmu id count");
    }
    for (size_t i = 0; i < data_.size(); ++i) {
        if (data_[i].size() != variables_.size()) {
            throw ValidationError("row '" + dmu_ids_[i] + "' has " +
                                  std::to_string(data_[i].size()) + " cells, expected " +
                                  std::to_string(variables_.size()));
        }
        for (size_t j = 0; j < variables_.size(); ++j) {
            const double v = data_[i][j];
            if (!std::isfinite(v) || v <= 0.0) {
                throw ValidationError("nonpositive or non-finite value at row '" + dmu_ids_[i] +
                                      "', column '" + variables_[j].name + "'");
            }
        }
    }
}

std::vector<double> DmuPanel::column(int variable) const {
    std::vector<double> col(dmu_count());
    for (int i = 0; i < dmu_count(); ++i) col[i] = data_[i][variable];
    return col;
}

double DmuPanel::column_min(int variable) const {
    double m = data_[0][variable];
    for (int i = 1; i < dmu_count(); ++i) m = std::min(m, data_[i][variable]);
    return m;
}

double DmuPanel::column_max(int variable) const {
    double m = data_[0][variable];
    for (int i = 1; i < dmu_count(); ++i) m = std::max(m, data_[i][variable]);
    return m;
}

double DmuPanel::column_mean(int variable) const {
    double sum = 0.0;
    for (int i = 0; i < dmu_count(); ++i) sum += data_[i][variable];
    return sum / dmu_count();
}

int DmuPanel::find_dmu(const std::string& id) const {
    for (int i = 0; i < dmu_count(); ++i) {
        if (dmu_ids_[i] == id) return i;
    }
    return -1;
}

int DmuPanel::find_variable(const std::string& name) const {
    for (int j = 0; j < variable_count(); ++j) {
        if (variables_[j].name == name) return j;
    }
    return -1;
}

std::vector<VariableStats> DmuPanel::stats() const {
    std::vector<VariableStats> out(variable_count());
    const int n = dmu_count();
    for (int j = 0; j < variable_count(); ++j) {
        VariableStats& s = out[j];
        s.min = column_min(j);
        s.max = column_max(j);
        s.mean = column_mean(j);
        double ss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = data_[i][j] - s.mean;
            ss += d * d;
        }
        s.std_dev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    }
    return out;
}

DmuPanel DmuPanel::with_reciprocal(const std::vector<std::string>& variable_names) const {
    std::vector<std::vector<double>> data = data_;
    for (const auto& name : variable_names) {
        const int j = find_variable(name);
        if (j < 0) {
            throw ValidationError("reciprocal transform: no column named '" + name + "'");
        }
        for (int i = 0; i < dmu_count(); ++i) data[i][j] = 1.0 / data[i][j];
    }
    return DmuPanel(dmu_ids_, variables_, std::move(data));
}

} // namespace sbmopa
