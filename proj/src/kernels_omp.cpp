// Copyright 2026 The fqaoa-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenMP kernels. Loop bodies are shared with the serial reference; only the
// work distribution differs, so results match it bit for bit.
#define FQAOA_KERNEL_NS parallel
#define FQAOA_PRAGMA(x) _Pragma(#x)
#define FQAOA_OMP_FOR(n) FQAOA_PRAGMA(omp parallel for schedule(static) if ((n) >= kParallelThreshold))
#include "kernels_impl.inc"
