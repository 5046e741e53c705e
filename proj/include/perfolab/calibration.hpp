#pragma once

// Constants of the calibrated-inequality properties. Each is twice the
// largest ratio measured on the reference corpus (seed 20240917, 100 fields)
// by `perfolab selftest --calibrate` (measured 0.0548, 1.0, 0.609); the
// properties assert ratio <= constant.

namespace perfolab::calibration {

inline constexpr double kLemma12 = 0.110;  // int_A u^2 dmu <= C ||mu||_K int |grad u|^2
inline constexpr double kLemma22 = 2.0;   // max_rho M_r^rho phi <= C M_r^{r/2} phi
inline constexpr double kLemma23 = 1.22;  // ||u - M u||_{L2(Q_r)} <= C r ||grad u||_{L2(Q_r)}

}  // namespace perfolab::calibration
