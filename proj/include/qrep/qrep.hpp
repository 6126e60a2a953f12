// Copyright 2026 The QRep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qrep/budget.hpp"
#include "qrep/circuit.hpp"
#include "qrep/engine.hpp"
#include "qrep/errors.hpp"
#include "qrep/gate.hpp"
#include "qrep/localizer.hpp"
#include "qrep/mutation.hpp"
#include "qrep/optimizer.hpp"
#include "qrep/patch.hpp"
#include "qrep/qasm.hpp"
#include "qrep/report.hpp"
#include "qrep/rng.hpp"
#include "qrep/simulator.hpp"
#include "qrep/testkit.hpp"
