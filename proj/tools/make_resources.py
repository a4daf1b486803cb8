#!/usr/bin/env python3
"""Regenerates resources/lexicon.tsv and resources/qwerty.tsv.

The lexicon is built from hand-curated synonym groups: every member of a
group lists the other members as synonyms. Words that appear in several
groups get the union, in first-seen order. Output is sorted by key so the
file is stable under group reordering.
"""

import pathlib
import sys

GROUPS = """
happy glad joyful cheerful content pleased delighted
sad unhappy sorrowful gloomy downcast miserable dejected
angry mad furious irate enraged livid cross
afraid scared frightened fearful terrified alarmed
anxious nervous worried uneasy tense jittery apprehensive
calm peaceful serene tranquil relaxed composed
tired exhausted weary drained fatigued sleepy worn
big large huge enormous massive giant vast
small little tiny minute petite compact miniature
fast quick rapid swift speedy hasty brisk
slow sluggish leisurely unhurried gradual plodding
smart clever intelligent bright brilliant sharp wise
stupid dumb foolish silly dense idiotic
good fine great excellent superb wonderful splendid
bad awful terrible horrible dreadful lousy poor
beautiful pretty lovely attractive gorgeous stunning
ugly hideous unsightly homely unattractive
strong powerful mighty sturdy robust tough
weak feeble frail fragile flimsy delicate
rich wealthy affluent prosperous loaded
easy simple effortless straightforward painless
hard difficult tough challenging demanding arduous
important crucial vital essential significant key critical
strange odd weird unusual peculiar bizarre curious
normal ordinary regular typical usual standard common
new fresh novel modern recent current
old ancient aged elderly antique former
begin start commence initiate launch open
end finish conclude complete terminate close
help assist aid support back
hurt harm injure wound damage
think believe consider suppose reckon ponder
say state declare mention remark utter
tell inform notify advise
talk speak chat converse discuss
shout yell scream holler bellow
look see watch observe view glance gaze
show display exhibit present reveal demonstrate
hide conceal cover mask obscure
find discover locate uncover detect
get obtain acquire gain receive earn
give provide offer supply grant donate
take grab seize grasp snatch
keep retain hold maintain preserve
leave depart exit go quit
come arrive approach appear reach
walk stroll wander hike march amble
run sprint dash race jog hurry rush
jump leap hop bound spring
eat consume devour dine munch
drink sip gulp swallow guzzle
sleep rest nap doze slumber snooze
wake awaken rouse stir
cry weep sob wail whimper
laugh giggle chuckle chortle snicker
smile grin beam smirk
love adore cherish treasure
hate loathe despise detest abhor
like enjoy fancy appreciate relish
want desire wish crave yearn long
need require demand lack
try attempt endeavor strive seek
make create build construct produce craft form
break smash shatter crack fracture
fix repair mend restore patch
change alter modify adjust transform shift
move shift relocate transfer budge
use utilize employ apply exploit
work labor toil job employment occupation
job position post role career
house home residence dwelling abode
car automobile vehicle auto
road street avenue lane route path way
city town municipality metropolis
friend buddy pal companion mate ally
enemy foe opponent adversary rival
child kid youngster youth juvenile
man guy gentleman fellow chap
woman lady female dame
parent mother father guardian
boss manager supervisor chief head
doctor physician medic clinician
problem issue trouble difficulty complication
answer reply response solution
question query inquiry
idea notion concept thought
plan scheme strategy program proposal
goal aim objective target purpose
reason cause motive basis ground
result outcome consequence effect
chance opportunity prospect possibility
risk danger hazard peril threat
fear dread terror fright panic
worry concern anxiety unease apprehension
stress strain pressure tension burden
pain ache agony discomfort soreness
sickness illness disease ailment malady
healthy fit well sound hale
sick ill unwell ailing poorly
mind brain intellect psyche
feeling emotion sentiment sensation
mood temper humor disposition spirit
memory recollection remembrance
dream vision fantasy reverie
thought reflection contemplation musing
attention focus concentration notice
focus concentrate center fixate
forget overlook neglect omit
remember recall recollect reminisce
understand comprehend grasp realize fathom
learn study discover master absorb
teach instruct educate train tutor coach
school academy college institute
class lesson course session lecture
test exam quiz assessment trial
grade mark score rating
money cash funds currency dough
price cost fee charge rate
buy purchase acquire shop
sell vend trade peddle market
pay compensate reimburse settle
save rescue protect guard shield
destroy ruin wreck demolish devastate
quiet silent hushed still noiseless
loud noisy deafening thunderous boisterous
dark dim gloomy murky shadowy
light bright luminous radiant brilliant
hot warm scorching boiling burning
cold chilly freezing icy frigid cool
wet damp moist soggy soaked
dry arid parched dehydrated
clean spotless tidy neat pristine
dirty filthy grimy messy unclean
empty vacant hollow bare void
full packed crowded crammed stuffed
near close nearby adjacent neighboring
far distant remote faraway
high tall lofty elevated towering
low short squat
long lengthy extended prolonged lasting
short brief concise quick fleeting
wide broad expansive spacious
narrow thin slim slender tight
heavy weighty hefty bulky
soft gentle tender mild smooth
rough coarse harsh rugged uneven
safe secure protected sheltered
dangerous risky hazardous perilous unsafe
true correct accurate right exact
false wrong incorrect mistaken untrue
real actual genuine authentic
fake phony counterfeit bogus sham
honest truthful sincere candid frank
kind nice caring compassionate gentle considerate
mean cruel nasty unkind spiteful
brave courageous bold fearless daring heroic
shy timid bashful reserved
proud dignified arrogant haughty
lazy idle slothful inactive
busy occupied engaged active hectic
lonely isolated alone solitary lonesome
together jointly collectively mutually
alone solo unaccompanied lone
often frequently regularly repeatedly commonly
sometimes occasionally periodically
always constantly forever perpetually continually
never nevermore
maybe perhaps possibly conceivably
really truly genuinely actually indeed
very extremely highly incredibly exceedingly
almost nearly practically virtually roughly
quickly rapidly swiftly speedily hastily
slowly gradually steadily leisurely
suddenly abruptly unexpectedly instantly
finally eventually ultimately lastly
usually normally generally typically ordinarily
probably likely presumably
completely totally entirely fully wholly utterly
barely hardly scarcely
exactly precisely accurately
certainly definitely surely undoubtedly
clearly obviously evidently plainly
simply merely just only
mostly mainly largely chiefly primarily
recently lately newly
currently presently now
today nowadays
tomorrow
yesterday
morning dawn daybreak sunrise
night evening dusk nightfall
week
day daytime
time period era age epoch
moment instant second minute
place spot location site position area
world globe earth planet
country nation state land realm
people folks persons individuals humans
person individual human being soul
family household clan kin relatives
group team crew band squad gang
crowd throng mob horde multitude
part piece portion section segment fragment
whole entire complete total full
thing object item article
stuff things belongings possessions
way method manner means approach technique
kind type sort variety category class
shape form figure outline
size magnitude dimension extent scale
amount quantity sum volume number
lot plenty abundance loads heaps
few some several handful
many numerous countless multiple various
each every
other different alternative another
same identical equal equivalent alike
similar comparable alike akin related
special unique particular distinct specific
main primary principal chief major central
little minor slight trivial negligible
huge immense colossal gigantic tremendous
great terrific fabulous fantastic marvelous
nice pleasant agreeable enjoyable delightful
funny amusing hilarious comical humorous witty
boring dull tedious monotonous dreary
interesting fascinating intriguing engaging compelling
exciting thrilling exhilarating stirring
scary frightening terrifying spooky creepy eerie
sure certain positive confident convinced
unsure uncertain doubtful hesitant unconvinced
ready prepared set willing
able capable competent skilled qualified
unable incapable powerless helpless
free liberated independent unrestricted
stuck trapped caught confined
lost missing misplaced vanished
hungry famished starving ravenous
thirsty parched dry
upset distressed disturbed troubled shaken
confused puzzled baffled bewildered perplexed
surprised astonished amazed startled shocked stunned
bored uninterested weary jaded
excited thrilled eager enthusiastic keen
hopeful optimistic expectant confident
hopeless desperate despairing forlorn
grateful thankful appreciative obliged
guilty ashamed remorseful sorry regretful
jealous envious resentful covetous
embarrassed humiliated mortified ashamed
overwhelmed swamped overloaded inundated
restless agitated fidgety unsettled
numb deadened insensible
empty hollow
broken shattered crushed devastated
fine okay alright decent acceptable
awful atrocious appalling abysmal
doing performing
feel sense perceive experience
seem appear look
become turn grow get
stay remain linger wait
wait pause hold delay
stop halt cease quit discontinue
continue proceed persist carry
allow permit let enable authorize
forbid ban prohibit bar
ask request inquire question
answer respond reply
agree concur consent assent
refuse decline reject deny
accept receive admit welcome
choose select pick opt elect
decide determine resolve settle
fail flunk miss falter
succeed prosper thrive flourish win
win triumph prevail conquer
lose misplace forfeit
fight battle combat struggle clash brawl
argue quarrel bicker squabble dispute
attack assault strike raid charge
protect defend guard shield safeguard
escape flee bolt abscond
follow pursue chase trail track
lead guide direct steer conduct
join unite connect link combine
separate divide split part detach
open unlock unfasten unseal
close shut seal
throw toss hurl fling pitch
catch capture trap snare
push shove thrust press propel
pull drag tug haul yank
carry bring transport convey bear
send dispatch mail ship forward
call phone ring dial summon
write compose pen draft scribble
read peruse scan browse skim
draw sketch illustrate depict
sing chant croon hum
play frolic romp
dance boogie sway
cook prepare bake roast fry
wash clean rinse scrub cleanse
wear don sport
dress clothe garb attire outfit
clothes clothing garments apparel attire
food meal cuisine fare grub nourishment
drinks beverages refreshments
water liquid fluid
fire flame blaze inferno
smoke fumes vapor
wind breeze gust gale draft
rain drizzle downpour shower
storm tempest squall gale
sun sunshine sunlight daylight
sky heavens firmament
sea ocean deep main
river stream creek brook
hill mound knoll slope
mountain peak summit alp
forest woods woodland jungle
tree sapling
flower blossom bloom
animal creature beast critter
dog hound pup puppy canine mutt
cat kitty feline kitten
bird fowl
fish
book novel volume tome publication
story tale narrative account anecdote
news information report tidings update
letter note message memo
picture image photo photograph portrait
movie film picture flick motion
song tune melody ditty
music
game match contest competition
sport athletics
party celebration gathering festivity bash
trip journey voyage tour excursion expedition
vacation holiday break getaway
gift present offering donation
reward prize award bonus
punishment penalty sentence discipline
rule regulation law guideline principle
law statute ordinance decree
crime offense felony misdeed violation
police cops officers authorities
army military troops forces
war conflict warfare combat hostilities
peace harmony tranquility calm
power strength force might energy
energy vigor vitality stamina zest
speed velocity pace tempo rate
light lamp lantern torch
noise sound racket din clamor
voice tone speech
word term expression phrase
language tongue dialect idiom
sign signal indication symbol token
mark stain spot blemish
color hue shade tint tone
edge border rim margin boundary brink
center middle core heart hub
top peak summit pinnacle apex
bottom base foundation floor
side flank edge
front face facade
back rear behind
inside interior within
outside exterior outdoors
start beginning origin outset onset
finish ending conclusion close completion
fact reality truth certainty
lie falsehood untruth fib fabrication
secret mystery enigma riddle
truth honesty veracity candor
mistake error blunder slip fault
success achievement accomplishment victory triumph
failure defeat flop fiasco
victory win triumph conquest
damage harm injury destruction
change alteration modification shift transformation
growth development expansion increase
increase rise boost gain surge
decrease drop decline reduction fall dip
improve enhance better upgrade refine
worsen deteriorate decline degrade
simple plain basic elementary
complex complicated intricate elaborate
clear obvious plain evident apparent
vague unclear fuzzy hazy ambiguous
quiet calm still peaceful
wild untamed savage feral
gentle mild tender soft
violent brutal fierce savage vicious
sleepy drowsy tired lethargic
awake alert conscious attentive
alive living breathing
dead deceased departed lifeless
young youthful juvenile adolescent
adult grownup mature
early premature
late tardy overdue delayed belated
quick prompt immediate instant
buddy friend pal
mom mother mum mama
dad father papa pop
husband spouse partner
wife spouse partner
baby infant newborn toddler
teenager teen adolescent youth
student pupil learner scholar
teacher instructor educator tutor professor
worker employee laborer staffer
company firm business corporation enterprise
office bureau workplace
meeting conference assembly session gathering
project undertaking venture task assignment
task chore duty job assignment errand
effort exertion endeavor attempt
skill ability talent aptitude knack
habit routine custom practice pattern
routine schedule regimen pattern
chance luck fortune fate
future tomorrow hereafter
past history yesteryear
life existence being
death demise passing
birth creation origin
body physique frame build
head skull noggin
face visage countenance features
eye eyeball
hand palm fist
heart ticker
stomach belly tummy gut abdomen
skin hide flesh
hair locks tresses mane
bed bunk cot
room chamber space
door entrance doorway gateway portal
window pane
wall barrier partition fence
floor ground deck flooring
chair seat stool bench
table desk counter
phone telephone cellphone mobile
computer laptop pc machine
screen monitor display
bag sack pouch purse satchel
box crate carton case container
bottle flask jug vessel
cup mug glass tumbler
pill tablet capsule medication
medicine medication remedy drug treatment cure
therapy treatment counseling
doctor doc
nurse caregiver attendant
hospital clinic infirmary
appointment meeting engagement booking
diagnosis assessment evaluation
symptom sign indication indicator
episode incident bout spell occurrence
attack fit seizure spasm
crash collapse breakdown
cope manage handle deal endure survive
struggle strive wrestle grapple toil
suffer endure bear undergo
recover heal improve recuperate rally
relapse regress backslide
calmness composure serenity equanimity
sadness sorrow grief misery melancholy unhappiness
happiness joy delight bliss cheer gladness
anger rage fury wrath ire
shame disgrace humiliation embarrassment
guilt remorse regret contrition
loneliness isolation solitude seclusion
hope optimism expectation faith
despair hopelessness desperation despondency
confidence assurance certainty poise
doubt uncertainty hesitation skepticism misgiving
motivation drive ambition incentive
interest curiosity fascination concern
trust faith belief reliance confidence
support backing assistance help aid
advice counsel guidance recommendation tip
opinion view belief judgment viewpoint
fault blame responsibility liability
nightmare bad-dream night-terror
flashback recollection memory
trigger cause prompt spark provoke
scream shriek screech yell
restless sleepless
mess clutter disorder chaos jumble
chaos turmoil mayhem havoc confusion
order arrangement sequence organization
organize arrange sort classify
forgetful absentminded scatterbrained
distracted sidetracked diverted preoccupied
impulsive rash reckless hasty impetuous
careful cautious wary prudent attentive
hyper hyperactive energetic wired
paranoid suspicious distrustful
moody temperamental volatile changeable
manic frenzied feverish wild
euphoric elated ecstatic jubilant
irritable cranky grumpy testy touchy grouchy
jumpy edgy skittish nervy
panic alarm hysteria
shaky trembling quivering unsteady wobbly
dizzy lightheaded giddy woozy
sweat perspire
heartbeat pulse
breath breathing respiration
breathe inhale exhale respire
""".strip()

ROWS = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]


def build_lexicon():
    entries = {}
    order = []
    for line in GROUPS.splitlines():
        words = [w.lower() for w in line.split()]
        if len(words) < 2:
            continue
        for w in words:
            if w not in entries:
                entries[w] = []
                order.append(w)
            for other in words:
                if other != w and other not in entries[w]:
                    entries[w].append(other)
    return {k: v for k, v in entries.items() if v}


def build_qwerty():
    pos = {}
    for r, row in enumerate(ROWS):
        for c, ch in enumerate(row):
            pos[ch] = (r, c)
    adj = {ch: set() for ch in pos}
    for ch, (r, c) in pos.items():
        candidates = [(r, c - 1), (r, c + 1)]
        # Rows are staggered: the key below-left shares column c-1, above-right c+1.
        if r > 0:
            candidates += [(r - 1, c), (r - 1, c + 1)]
        if r < len(ROWS) - 1:
            candidates += [(r + 1, c - 1), (r + 1, c)]
        for rr, cc in candidates:
            if 0 <= rr < len(ROWS) and 0 <= cc < len(ROWS[rr]):
                other = ROWS[rr][cc]
                adj[ch].add(other)
                adj[other].add(ch)
    return adj


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "resources")
    out.mkdir(parents=True, exist_ok=True)
    lex = build_lexicon()
    with open(out / "lexicon.tsv", "w", newline="\n") as f:
        f.write("# token<TAB>comma-separated synonyms; generated by tools/make_resources.py\n")
        for key in sorted(lex):
            f.write(f"{key}\t{','.join(lex[key])}\n")
    adj = build_qwerty()
    with open(out / "qwerty.tsv", "w", newline="\n") as f:
        f.write("# char<TAB>comma-separated adjacent keys (lowercase QWERTY letters)\n")
        for ch in sorted(adj):
            f.write(f"{ch}\t{','.join(sorted(adj[ch]))}\n")
    print(f"lexicon entries: {len(lex)}; layout keys: {len(adj)}")


if __name__ == "__main__":
    main()
