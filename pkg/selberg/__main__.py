from selberg.main import main

main()
