#pragma once

namespace sspec {

/// Worker threads used by scans and quadratures. 0 restores the default, which
/// is $SSPEC_JOBS when set and the OpenMP default otherwise. Results do not
/// depend on this value.
void setThreadCount(int n);
int threadCount();

}  // namespace sspec
