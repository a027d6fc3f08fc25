/*
   Copyright 2026 The percolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "percolab/bond_config.hpp"
#include "percolab/connectivity.hpp"
#include "percolab/continuum.hpp"
#include "percolab/enhancement.hpp"
#include "percolab/estimator.hpp"
#include "percolab/io.hpp"
#include "percolab/lattice.hpp"
#include "percolab/matcher.hpp"
#include "percolab/parallel.hpp"
#include "percolab/renormalizer.hpp"
#include "percolab/rng.hpp"
