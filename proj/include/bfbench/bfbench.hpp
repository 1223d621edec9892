// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include "bfbench/bfnull.hpp"
#include "bfbench/errors.hpp"
#include "bfbench/exact.hpp"
#include "bfbench/generators.hpp"
#include "bfbench/io.hpp"
#include "bfbench/metrics.hpp"
#include "bfbench/model.hpp"
#include "bfbench/random.hpp"
#include "bfbench/reduce.hpp"
#include "bfbench/sample_set.hpp"
#include "bfbench/svg.hpp"
#include "bfbench/timing.hpp"
