// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include "common.hpp"

int main(int argc, char** argv) { return plantsam::cli::run(argc, argv); }
