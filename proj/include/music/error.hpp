/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MUSIC_ERROR_HPP
#define MUSIC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace music {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define MUSIC_DEFINE_ERROR(Name)                                               \
    class Name : public Error                                                  \
    {                                                                          \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}   \
    }

MUSIC_DEFINE_ERROR(InvalidTrajectory);
MUSIC_DEFINE_ERROR(InvalidGroup);
MUSIC_DEFINE_ERROR(InvalidInput);
MUSIC_DEFINE_ERROR(InvalidWorkflow);
MUSIC_DEFINE_ERROR(NoRealizingService);
MUSIC_DEFINE_ERROR(IncompletePlan);
MUSIC_DEFINE_ERROR(ExtremaMismatch);
MUSIC_DEFINE_ERROR(MissingProfile);
MUSIC_DEFINE_ERROR(IdError);
MUSIC_DEFINE_ERROR(LedgerUnderflow);
MUSIC_DEFINE_ERROR(NoFeasibleCandidates);
MUSIC_DEFINE_ERROR(TooLargeForEnumeration);
MUSIC_DEFINE_ERROR(UndefinedThroughput);
MUSIC_DEFINE_ERROR(UndefinedGain);
MUSIC_DEFINE_ERROR(ScenarioError);

#undef MUSIC_DEFINE_ERROR

} // namespace music

#endif // MUSIC_ERROR_HPP
