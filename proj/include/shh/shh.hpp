//  Copyright 2026 The shh Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include "shh/core.hpp"
#include "shh/datagen.hpp"
#include "shh/error.hpp"
#include "shh/harness.hpp"
#include "shh/heuristic.hpp"
#include "shh/independence.hpp"
#include "shh/naive_bayes.hpp"
#include "shh/oracle.hpp"
#include "shh/sampling.hpp"
#include "shh/sketches/count_min.hpp"
#include "shh/sketches/misra_gries.hpp"
#include "shh/sketches/reservoir.hpp"
#include "shh/stream_io.hpp"
