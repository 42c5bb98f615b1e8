#pragma once

#include <cstdint>

#include "dscim/common.hpp"

namespace dscim {

/// An unsigned operand after the bit-width sacrifice: shifted == raw >> k.
struct ShiftedOperand {
    std::uint8_t raw = 0;
    std::uint8_t shifted = 0;
    int k = 0;
};

/// truncating right shift; raw in [0,256), k in {0,1,2,3}
ShiftedOperand shift_value(unsigned raw, int k);

/// A row's rectangle of the 2^k x 2^k partition of the 256x256 sampling map.
/// (r_a, r_w) = (j mod 2^k, j div 2^k); bijective over a group of 4^k rows.
struct RegionAssignment {
    int row_in_group = 0;
    int r_a = 0;
    int r_w = 0;
    int k = 0;
};

RegionAssignment region_of_row(int j, int k);

/// Comparator form used by the SNG.
///
/// xor_mask is the canonical generalization: bit = (R ^ (r << (8-k))) < v,
/// i.e. R lies in [r*2^(8-k), r*2^(8-k) + v). reflect is the k<=1
/// inverted-data/inverted-comparator form from the hardware description:
/// r=0: R < v, r=1: R > ~v (active set [256-v, 256), same size, mirrored
/// to the far edge). Both confine region r to the same half/quarter of the
/// axis, so mutual exclusion holds in either mode.
enum class AxisMode { xor_mask, reflect };

/// 1 iff random byte R hits operand v's slice of region r along one axis.
bool axis_bit(const ShiftedOperand& v, int region, std::uint8_t r, AxisMode mode = AxisMode::xor_mask);

/// AND of the two axis comparators: 1 iff the sampling point (ra, rw) falls
/// in the row's rectangle.
bool row_product_bit(const ShiftedOperand& a, const ShiftedOperand& w, const RegionAssignment& assign,
                     std::uint8_t ra, std::uint8_t rw, AxisMode mode = AxisMode::xor_mask);

}  // namespace dscim
