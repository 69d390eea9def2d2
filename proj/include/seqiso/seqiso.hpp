#pragma once

#include "seqiso/errors.hpp"
#include "seqiso/linalg.hpp"
#include "seqiso/algebra.hpp"
#include "seqiso/sequential.hpp"
#include "seqiso/morphisms.hpp"
#include "seqiso/extension.hpp"
#include "seqiso/io.hpp"
#include "seqiso/analyzer.hpp"
#include "seqiso/report.hpp"
#include "seqiso/generate.hpp"
#include "seqiso/selftest.hpp"
#include "seqiso/cli.hpp"
