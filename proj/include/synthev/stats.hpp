/* Copyright 2026 The synthev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "synthev/stats/bootstrap.hpp"
#include "synthev/stats/chi_square.hpp"
#include "synthev/stats/mann_whitney.hpp"
#include "synthev/stats/regularization.hpp"
#include "synthev/stats/results.hpp"
#include "synthev/stats/series.hpp"
#include "synthev/stats/shapiro_wilk.hpp"
