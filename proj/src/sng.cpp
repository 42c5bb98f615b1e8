#include "dscim/sng.hpp"

namespace dscim {

ShiftedOperand shift_value(unsigned raw, int k) {
    if (raw > 255) throw ConfigError("shift_value: raw operand out of [0,256)");
    if (k < 0 || k > 3) throw ConfigError("shift_value: shift out of {0,1,2,3}");
    return ShiftedOperand{static_cast<std::uint8_t>(raw), static_cast<std::uint8_t>(raw >> k), k};
}

RegionAssignment region_of_row(int j, int k) {
    if (k < 0 || k > 3) throw ConfigError("region_of_row: shift out of {0,1,2,3}");
    const int side = 1 << k;
    if (j < 0 || j >= side * side) throw ConfigError("region_of_row: row index outside [0, 4^k)");
    return RegionAssignment{j, j % side, j / side, k};
}

bool axis_bit(const ShiftedOperand& v, int region, std::uint8_t r, AxisMode mode) {
    const int side = 1 << v.k;
    if (region < 0 || region >= side) throw ConfigError("axis_bit: region outside [0, 2^k)");
    if (mode == AxisMode::xor_mask) {
        const std::uint8_t masked = static_cast<std::uint8_t>(r ^ (region << (8 - v.k)));
        return masked < v.shifted;
    }
    if (v.k > 1) throw ConfigError("axis_bit: reflect form is defined for k <= 1 only");
    if (region == 0) return r < v.shifted;
    return r > static_cast<std::uint8_t>(~v.shifted);  // [256 - v, 256), size v
}

bool row_product_bit(const ShiftedOperand& a, const ShiftedOperand& w, const RegionAssignment& assign,
                     std::uint8_t ra, std::uint8_t rw, AxisMode mode) {
    if (a.k != assign.k || w.k != assign.k) {
        throw ConfigError("row_product_bit: operand shift does not match assignment");
    }
    return axis_bit(a, assign.r_a, ra, mode) && axis_bit(w, assign.r_w, rw, mode);
}

}  // namespace dscim
