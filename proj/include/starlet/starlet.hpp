/*
Copyright 2026 The Starlet Segmentation Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef STARLET_STARLET_HPP
#define STARLET_STARLET_HPP

#include "starlet/evaluation.hpp"
#include "starlet/image.hpp"
#include "starlet/io.hpp"
#include "starlet/kernel.hpp"
#include "starlet/mlss.hpp"
#include "starlet/synth.hpp"
#include "starlet/transform.hpp"

#endif  // STARLET_STARLET_HPP
