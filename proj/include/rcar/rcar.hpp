// Copyright 2026 The rcar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#ifndef RCAR_RCAR_HPP_
#define RCAR_RCAR_HPP_

#include "rcar/distributions.hpp"
#include "rcar/errors.hpp"
#include "rcar/estimators.hpp"
#include "rcar/gof.hpp"
#include "rcar/panel.hpp"
#include "rcar/quadrature.hpp"
#include "rcar/random.hpp"
#include "rcar/special_fn.hpp"
#include "rcar/study.hpp"
#include "rcar/text.hpp"

#endif  // RCAR_RCAR_HPP_
