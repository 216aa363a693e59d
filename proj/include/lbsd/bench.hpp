// Copyright 2026 The LBSD Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace lbsd {

/// Stops glibc from handing freed memory back to the kernel. Repeated stage
/// timings otherwise pay page faults for buffers the previous repeat freed,
/// a fixed per-call cost that swamps sub-millisecond stages. Process-wide;
/// meant for benchmark entry points only. No-op elsewhere.
inline void retain_heap_for_timing() {
#if defined(__GLIBC__)
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  mallopt(M_MMAP_THRESHOLD, 32 << 20);
#endif
}

}  // namespace lbsd
